// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_DETECT_HPP
#define DEPSCAN_DETECT_HPP

#include <optional>
#include <string>

#include "abi_diff.hpp"
#include "abi_model.hpp"
#include "usage.hpp"
#include "version.hpp"

namespace depscan {

// A dependency the application declares: library name plus the accepted
// version range from its control line.
struct RequiredDep {
  std::string library;
  VersionRange range;
};

// Verdict for one (application, change) pair. At most one bug side is
// present; an undecidable verdict carries no bug version at all.
struct DetectOutcome {
  std::optional<Version> bug_old;  // the pre-change release is incompatible
  std::optional<Version> bug_new;  // the post-change release is incompatible
  bool undecidable = false;
  std::string reason;

  bool has_bug() const { return bug_old.has_value() || bug_new.has_value(); }
};

// First phase: drop (app, change) pairs that cannot interact. True iff at
// least one end of the change lies in the accepted range AND the app uses
// the changed element — for symbols, an import matches the symbol key; for
// type members, an import matches some symbol whose signature references
// the type (at either end's snapshot).
bool filter_phase(const AppUsage& app, const RequiredDep& required,
                  const IncompatibleChange& ic, const LibraryHistory& h);

// Second phase: the per-kind rule table. Pure in (ic, app.imports,
// app.facts); the range gate is applied by detect(), not here.
//
//   adds kinds (1, 4, 13, 16)    -> bug_old iff the matching use-fact exists
//   removes kinds (2, 5, 14, 17) -> bug_new iff the matching use-fact exists
//   symbol adds (8, 11)          -> bug_old unconditionally
//   symbol removes (9, 12)       -> bug_new unconditionally
//   type changes (6, 10, 15, 18) -> type hint == old text -> bug_new;
//                                   hint == new text -> bug_old; else
//                                   undecidable
//   kinds 3, 7                   -> undecidable (member values and field
//                                   order cannot be inferred from usage)
//
// For parameter kinds 13/14 the use-fact is uses-param at the changed
// index, or any observed call whose arity covers that position.
DetectOutcome decide_side(const IncompatibleChange& ic, const AppUsage& app);

// filter_phase then decide_side, then the range gate: a bug version falling
// outside the accepted range is cleared to absent. Filtered pairs return
// the no-bug outcome with reason "filtered".
DetectOutcome detect(const AppUsage& app, const RequiredDep& required,
                     const IncompatibleChange& ic, const LibraryHistory& h);

}  // namespace depscan

#endif
