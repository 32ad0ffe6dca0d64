// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "suggest.hpp"

#include <stdexcept>

namespace depscan {
namespace {

// Element identity for the compatibility check: symbols match on the full
// key; type members match on (type, member) — the record/enum distinction
// is display metadata and must not hide a break when a type is reclassified
// between releases.
bool element_matches(const ElementRef& changed, const ElementRef& ele) {
  if (changed.is_symbol() != ele.is_symbol()) return false;
  if (ele.is_symbol()) return *changed.symbol == *ele.symbol;
  return changed.type_name == ele.type_name &&
         changed.member_name == ele.member_name;
}

const AbiSnapshot& release_at(const LibraryHistory& h, const Version& v) {
  auto idx = find_release(h, v);
  if (!idx)
    throw std::invalid_argument("version " + render_version(v) +
                                " is not a release of " + h.library);
  return h.releases[*idx];
}

// True when `required` names this exact version with an inclusive bound;
// such an endpoint was chosen by the application's control line, not by
// the history running out, so it renders concretely.
bool pinned_low(const VersionRange& required, const Version& v) {
  for (const auto& c : required.constraints)
    if ((c.relation == Relation::LaterEqual || c.relation == Relation::Exactly) &&
        compare_versions(c.bound, v) == 0)
      return true;
  return false;
}

bool pinned_high(const VersionRange& required, const Version& v) {
  for (const auto& c : required.constraints)
    if ((c.relation == Relation::EarlierEqual || c.relation == Relation::Exactly) &&
        compare_versions(c.bound, v) == 0)
      return true;
  return false;
}

std::size_t index_of(const std::vector<Version>& universe, const Version& v) {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (compare_versions(universe[i], v) == 0) return i;
  throw std::invalid_argument("interval endpoint " + render_version(v) +
                              " is not a released version");
}

}  // namespace

bool element_bbc(const AbiSnapshot& from, const AbiSnapshot& to,
                 const ElementRef& ele) {
  for (const IncompatibleChange& c : diff_backward(from, to))
    if (element_matches(c.element, ele)) return true;
  return false;
}

bool is_incompatible_version(const LibraryHistory& h, const Version& v_bug,
                             const Version& v_i, const ElementRef& ele) {
  const AbiSnapshot& bug = release_at(h, v_bug);
  const AbiSnapshot& other = release_at(h, v_i);
  return !element_bbc(bug, other, ele) && !element_bbc(other, bug, ele);
}

void apply_boundary_markers(IntervalSet& set, const LibraryHistory& h,
                            const VersionRange& required) {
  std::vector<Version> universe = release_versions(h);
  std::vector<int> groups = soname_groups(h);
  for (VersionInterval& iv : set.intervals) {
    std::size_t lo = index_of(universe, iv.lo);
    std::size_t hi = index_of(universe, iv.hi);
    bool lo_first = lo == 0 || groups[lo - 1] != groups[lo];
    bool hi_last = hi + 1 == universe.size() || groups[hi + 1] != groups[hi];
    iv.lo_open = lo_first && !pinned_low(required, iv.lo);
    iv.hi_open = hi_last && !pinned_high(required, iv.hi);
  }
}

IntervalSet suggest_incompatible_versions(const LibraryHistory& h,
                                          const IncompatibleChange& ic,
                                          const Version& v_bug,
                                          const VersionRange& required) {
  std::vector<Version> universe = release_versions(h);
  std::vector<int> groups = soname_groups(h);
  std::size_t bug_idx = index_of(universe, v_bug);

  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (groups[i] != groups[bug_idx]) continue;
    if (!range_contains(required, universe[i])) continue;
    if (is_incompatible_version(h, v_bug, universe[i], ic.element))
      members.push_back(i);
  }
  IntervalSet set = intervals_from_indices(universe, std::move(members), &groups);
  apply_boundary_markers(set, h, required);
  return set;
}

IntervalSet union_over_changes(const LibraryHistory& h,
                               const VersionRange& required,
                               const std::vector<IntervalSet>& sets) {
  std::vector<Version> universe = release_versions(h);
  std::vector<int> groups = soname_groups(h);
  std::vector<bool> member(universe.size(), false);
  for (const IntervalSet& s : sets)
    for (std::size_t i : interval_set_members(s, universe)) member[i] = true;
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (member[i]) indices.push_back(i);
  IntervalSet merged = intervals_from_indices(universe, std::move(indices), &groups);
  apply_boundary_markers(merged, h, required);
  return merged;
}

}  // namespace depscan
