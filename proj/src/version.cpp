// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#include "version.hpp"

#include <algorithm>
#include <cctype>

namespace depscan {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// dpkg character weight: digits are run separators, letters sort before
// other characters, and '~' sorts before everything including end-of-part.
int char_order(char c) {
  if (is_digit(c)) return 0;
  if (is_alpha(c)) return static_cast<unsigned char>(c);
  if (c == '~') return -1;
  if (c != '\0') return static_cast<unsigned char>(c) + 256;
  return 0;
}

// Debian part comparison over alternating non-digit and digit runs.
int compare_part(const std::string& sa, const std::string& sb) {
  const char* a = sa.c_str();
  const char* b = sb.c_str();
  while (*a != '\0' || *b != '\0') {
    int first_diff = 0;
    while ((*a != '\0' && !is_digit(*a)) || (*b != '\0' && !is_digit(*b))) {
      int ac = char_order(*a);
      int bc = char_order(*b);
      if (ac != bc) return ac < bc ? -1 : 1;
      ++a;
      ++b;
    }
    while (*a == '0') ++a;
    while (*b == '0') ++b;
    while (is_digit(*a) && is_digit(*b)) {
      if (first_diff == 0) first_diff = *a - *b;
      ++a;
      ++b;
    }
    if (is_digit(*a)) return 1;
    if (is_digit(*b)) return -1;
    if (first_diff != 0) return first_diff < 0 ? -1 : 1;
  }
  return 0;
}

bool all_printable(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c > ' ' && c < 0x7f;
  });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Version parse_version(std::string_view text) {
  if (text.empty()) throw ParseError("empty version text");
  if (!all_printable(text))
    throw ParseError("version text contains whitespace or non-printable characters: '" +
                     std::string(text) + "'");

  Version v;
  std::string_view rest = text;

  if (auto colon = rest.find(':'); colon != std::string_view::npos) {
    std::string_view epoch = rest.substr(0, colon);
    if (epoch.empty() || !std::all_of(epoch.begin(), epoch.end(), is_digit))
      throw ParseError("epoch must be a non-empty run of digits in '" + std::string(text) + "'");
    if (epoch.size() > 9) throw ParseError("epoch too large in '" + std::string(text) + "'");
    v.epoch = 0;
    for (char c : epoch) v.epoch = v.epoch * 10 + (c - '0');
    rest.remove_prefix(colon + 1);
  }

  if (auto dash = rest.rfind('-'); dash != std::string_view::npos) {
    std::string_view rev = rest.substr(dash + 1);
    if (rev.empty())
      throw ParseError("empty revision after '-' in '" + std::string(text) + "'");
    v.revision = std::string(rev);
    rest = rest.substr(0, dash);
  }

  if (rest.empty())
    throw ParseError("empty upstream part in '" + std::string(text) + "'");
  v.upstream = std::string(rest);
  return v;
}

std::string render_version(const Version& v) {
  std::string out;
  if (v.epoch != 0) {
    out += std::to_string(v.epoch);
    out += ':';
  }
  out += v.upstream;
  if (!v.revision.empty()) {
    out += '-';
    out += v.revision;
  }
  return out;
}

int compare_versions(const Version& a, const Version& b) {
  if (a.epoch != b.epoch) return a.epoch < b.epoch ? -1 : 1;
  if (int c = compare_part(a.upstream, b.upstream); c != 0) return c;
  return compare_part(a.revision, b.revision);
}

bool operator==(const Version& a, const Version& b) { return compare_versions(a, b) == 0; }
bool operator!=(const Version& a, const Version& b) { return compare_versions(a, b) != 0; }
bool operator<(const Version& a, const Version& b) { return compare_versions(a, b) < 0; }
bool operator<=(const Version& a, const Version& b) { return compare_versions(a, b) <= 0; }
bool operator>(const Version& a, const Version& b) { return compare_versions(a, b) > 0; }
bool operator>=(const Version& a, const Version& b) { return compare_versions(a, b) >= 0; }

std::string relation_text(Relation r) {
  switch (r) {
    case Relation::StrictlyEarlier: return "<<";
    case Relation::EarlierEqual: return "<=";
    case Relation::Exactly: return "=";
    case Relation::LaterEqual: return ">=";
    case Relation::StrictlyLater: return ">>";
  }
  return "?";
}

namespace {

Relation parse_relation(std::string_view op, std::string_view context) {
  if (op == "<<" || op == "<") return Relation::StrictlyEarlier;
  if (op == "<=") return Relation::EarlierEqual;
  if (op == "=") return Relation::Exactly;
  if (op == ">=") return Relation::LaterEqual;
  if (op == ">>" || op == ">") return Relation::StrictlyLater;
  throw ParseError("unknown relation '" + std::string(op) + "' in '" + std::string(context) + "'");
}

VersionConstraint parse_constraint(std::string_view body, std::string_view context) {
  body = trim(body);
  std::size_t op_len = 0;
  while (op_len < body.size() &&
         (body[op_len] == '<' || body[op_len] == '>' || body[op_len] == '=')) {
    ++op_len;
  }
  if (op_len == 0)
    throw ParseError("missing relation in constraint '" + std::string(context) + "'");
  VersionConstraint c;
  c.relation = parse_relation(body.substr(0, op_len), context);
  std::string_view ver = trim(body.substr(op_len));
  if (ver.empty())
    throw ParseError("missing version in constraint '" + std::string(context) + "'");
  c.bound = parse_version(ver);
  return c;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      parts.push_back(line.substr(start));
      break;
    }
    parts.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

}  // namespace

std::string render_range(const VersionRange& r) {
  if (r.accepts_all()) return "*";
  std::string out;
  for (const auto& c : r.constraints) {
    if (!out.empty()) out += ", ";
    out += relation_text(c.relation);
    out += ' ';
    out += render_version(c.bound);
  }
  return out;
}

bool range_contains(const VersionRange& r, const Version& v) {
  for (const auto& c : r.constraints) {
    int cmp = compare_versions(v, c.bound);
    bool ok = false;
    switch (c.relation) {
      case Relation::StrictlyEarlier: ok = cmp < 0; break;
      case Relation::EarlierEqual: ok = cmp <= 0; break;
      case Relation::Exactly: ok = cmp == 0; break;
      case Relation::LaterEqual: ok = cmp >= 0; break;
      case Relation::StrictlyLater: ok = cmp > 0; break;
    }
    if (!ok) return false;
  }
  return true;
}

std::vector<Dependency> parse_depends(std::string_view line) {
  std::vector<Dependency> deps;
  if (trim(line).empty()) return deps;
  if (line.find('|') != std::string_view::npos)
    throw ParseError("alternative dependencies ('|') are not supported: '" +
                     std::string(line) + "'");

  std::size_t index = 0;
  for (std::string_view entry : split_commas(line)) {
    entry = trim(entry);
    if (entry.empty())
      throw ParseError("empty dependency entry at index " + std::to_string(index));

    Dependency dep;
    auto paren = entry.find('(');
    if (paren == std::string_view::npos) {
      if (entry.find(')') != std::string_view::npos)
        throw ParseError("unbalanced parentheses in entry " + std::to_string(index) + ": '" +
                         std::string(entry) + "'");
      dep.package = std::string(entry);
    } else {
      auto close = entry.rfind(')');
      if (close == std::string_view::npos || close < paren || !trim(entry.substr(close + 1)).empty())
        throw ParseError("unbalanced parentheses in entry " + std::to_string(index) + ": '" +
                         std::string(entry) + "'");
      dep.package = std::string(trim(entry.substr(0, paren)));
      dep.range.constraints.push_back(
          parse_constraint(entry.substr(paren + 1, close - paren - 1), entry));
    }
    if (dep.package.empty() || !all_printable(dep.package))
      throw ParseError("bad package name in entry " + std::to_string(index) + ": '" +
                       std::string(entry) + "'");
    deps.push_back(std::move(dep));
    ++index;
  }
  return deps;
}

VersionRange parse_range(std::string_view text) {
  VersionRange r;
  if (trim(text).empty() || trim(text) == "*") return r;
  for (std::string_view entry : split_commas(text)) {
    r.constraints.push_back(parse_constraint(entry, text));
  }
  return r;
}

namespace {

std::size_t universe_index(const std::vector<Version>& universe, const Version& v) {
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (compare_versions(universe[i], v) == 0) return i;
  }
  throw std::invalid_argument("interval endpoint '" + render_version(v) +
                              "' is not a member of the release universe");
}

}  // namespace

IntervalSet intervals_from_indices(const std::vector<Version>& universe,
                                   std::vector<std::size_t> indices,
                                   const std::vector<int>* group_of) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

  IntervalSet out;
  std::size_t i = 0;
  while (i < indices.size()) {
    std::size_t run_start = indices[i];
    std::size_t run_end = run_start;
    if (run_end >= universe.size())
      throw std::invalid_argument("interval member index out of range");
    while (i + 1 < indices.size() && indices[i + 1] == run_end + 1 &&
           (group_of == nullptr || (*group_of)[run_end + 1] == (*group_of)[run_start])) {
      ++i;
      ++run_end;
    }
    out.intervals.push_back({universe[run_start], universe[run_end], false, false});
    ++i;
  }
  return out;
}

IntervalSet normalize_intervals(const IntervalSet& set,
                                const std::vector<Version>& universe,
                                const std::vector<int>* group_of) {
  return intervals_from_indices(universe, interval_set_members(set, universe), group_of);
}

std::vector<std::size_t> interval_set_members(const IntervalSet& set,
                                              const std::vector<Version>& universe) {
  std::vector<std::size_t> members;
  for (const auto& iv : set.intervals) {
    std::size_t lo = universe_index(universe, iv.lo);
    std::size_t hi = universe_index(universe, iv.hi);
    if (lo > hi) throw std::invalid_argument("interval with lo above hi");
    for (std::size_t i = lo; i <= hi; ++i) members.push_back(i);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

std::string render_interval_set(const IntervalSet& set) {
  if (set.intervals.empty()) return "[]";
  std::string out;
  for (const auto& iv : set.intervals) {
    if (!out.empty()) out += " U ";
    bool singleton = compare_versions(iv.lo, iv.hi) == 0;
    if (singleton) {
      out += '[' + render_version(iv.lo) + ']';
      continue;
    }
    out += '[';
    out += iv.lo_open ? "V_init" : render_version(iv.lo);
    out += ", ";
    out += iv.hi_open ? "V_last" : render_version(iv.hi);
    out += ']';
  }
  return out;
}

}  // namespace depscan
