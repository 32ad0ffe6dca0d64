// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_SUGGEST_HPP
#define DEPSCAN_SUGGEST_HPP

#include <vector>

#include "abi_diff.hpp"
#include "abi_model.hpp"
#include "version.hpp"

namespace depscan {

// True iff moving a binary built against `from` onto `to` breaks on this
// specific element — i.e. the backward diff restricted to `ele` is
// non-empty. Symbol elements match on the symbol key; type elements match
// on (type, member).
bool element_bbc(const AbiSnapshot& from, const AbiSnapshot& to,
                 const ElementRef& ele);

// True iff v_i and v_bug are mutually compatible on `ele` — neither
// direction of the element-restricted diff breaks. Incompatible versions
// are exactly those where this holds: they expose the same broken shape
// the bug version does. Both versions must exist in the history.
bool is_incompatible_version(const LibraryHistory& h, const Version& v_bug,
                             const Version& v_i, const ElementRef& ele);

// All released versions equivalent to v_bug on the changed element,
// restricted to v_bug's soname group and the accepted range, as a
// normalized interval set over history order. v_bug is always a member.
IntervalSet suggest_incompatible_versions(const LibraryHistory& h,
                                          const IncompatibleChange& ic,
                                          const Version& v_bug,
                                          const VersionRange& required);

// Normalized union of the per-change interval sets of one (library, app)
// pair. The history and accepted range are those of the pair; boundary
// markers are recomputed on the merged set.
IntervalSet union_over_changes(const LibraryHistory& h,
                               const VersionRange& required,
                               const std::vector<IntervalSet>& sets);

// Marks interval endpoints that coincide with their soname group's first or
// last release — unless the accepted range pins that exact version with an
// inclusive bound, in which case the endpoint stays concrete. Marked
// endpoints render as V_init/V_last.
void apply_boundary_markers(IntervalSet& set, const LibraryHistory& h,
                            const VersionRange& required);

}  // namespace depscan

#endif
