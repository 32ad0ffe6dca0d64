// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_VERSION_HPP
#define DEPSCAN_VERSION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace depscan {

// Raised for malformed version texts, dependency lines, and constraint lists.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a snapshot, manifest, or usage file violates its schema.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Debian package version: [epoch:]upstream[-revision].
// Parts are stored verbatim; comparison is semantic, so "1.02" and "1.2"
// compare equal while rendering differently.
struct Version {
  int epoch = 0;
  std::string upstream;
  std::string revision;
};

Version parse_version(std::string_view text);

// Canonical rendering: epoch printed only when non-zero, revision only when
// present. parse_version(render_version(v)) compares equal to v.
std::string render_version(const Version& v);

// Debian comparison: epochs numerically, then upstream and revision by
// alternating non-digit/digit runs where '~' sorts before everything
// including the end of the string. Returns <0, 0, >0.
int compare_versions(const Version& a, const Version& b);

bool operator==(const Version& a, const Version& b);
bool operator!=(const Version& a, const Version& b);
bool operator<(const Version& a, const Version& b);
bool operator<=(const Version& a, const Version& b);
bool operator>(const Version& a, const Version& b);
bool operator>=(const Version& a, const Version& b);

enum class Relation { StrictlyEarlier, EarlierEqual, Exactly, LaterEqual, StrictlyLater };

std::string relation_text(Relation r);

struct VersionConstraint {
  Relation relation = Relation::Exactly;
  Version bound;
};

// Conjunction of constraints; empty accepts every version.
struct VersionRange {
  std::vector<VersionConstraint> constraints;

  bool accepts_all() const { return constraints.empty(); }
};

std::string render_range(const VersionRange& r);

bool range_contains(const VersionRange& r, const Version& v);

// One dependency entry: package name plus accepted range.
struct Dependency {
  std::string package;
  VersionRange range;
};

// Parses a Debian-style dependency line: `name (rel ver), name, ...`.
// Relations are '<<', '<=', '=', '>=', '>>'; bare '<' and '>' are accepted
// as input aliases for the strict forms. Alternatives ('|') are rejected.
std::vector<Dependency> parse_depends(std::string_view line);

// Parses a bare constraint list such as ">= 2.37.6" or ">= 1.0, << 2.0".
// Empty or blank input yields an accepts-all range.
VersionRange parse_range(std::string_view text);

// Closed interval over released versions. lo_open/hi_open mark endpoints
// that sit on a soname-group boundary and are not pinned by the required
// range; they render symbolically as V_init/V_last.
struct VersionInterval {
  Version lo;
  Version hi;
  bool lo_open = false;
  bool hi_open = false;
};

// Sorted, disjoint, non-adjacent closed intervals over a release universe.
struct IntervalSet {
  std::vector<VersionInterval> intervals;

  bool empty() const { return intervals.empty(); }
};

// Builds a normalized IntervalSet from member indices into `universe`
// (the ordered release list). Consecutive indices merge into one interval;
// when `group_of` is given, runs never merge across group boundaries.
IntervalSet intervals_from_indices(const std::vector<Version>& universe,
                                   std::vector<std::size_t> indices,
                                   const std::vector<int>* group_of = nullptr);

// Re-normalizes an interval set whose endpoints are members of `universe`:
// expands to the member set and rebuilds. Idempotent. Open-end markers are
// dropped; callers re-apply them once the final set is known.
IntervalSet normalize_intervals(const IntervalSet& set,
                                const std::vector<Version>& universe,
                                const std::vector<int>* group_of = nullptr);

// Expands an interval set to the indices of its members in `universe`.
std::vector<std::size_t> interval_set_members(const IntervalSet& set,
                                              const std::vector<Version>& universe);

// "[1.2.1, V_last]", "[2.37.6, 2.39.1]", "[1.2.5.2]"; intervals joined
// with " U ". Single-version intervals always render concrete.
std::string render_interval_set(const IntervalSet& set);

}  // namespace depscan

#endif
