// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_ORACLE_HPP
#define DEPSCAN_ORACLE_HPP

#include <string>
#include <vector>

#include "abi_model.hpp"
#include "detect.hpp"
#include "usage.hpp"
#include "version.hpp"

namespace depscan {

// Ground-truth link simulation. The checks here read the snapshot directly
// and never consult the diff machinery, so they are independent evidence
// for what the pipeline reports.

enum class FailureKind {
  MissingSymbol,      // import has no matching definition
  SymbolKindChanged,  // function fact against a variable, or vice versa
  VoidReturnUsed,     // uses-return-value against a void function
  TypeMismatch,       // a recorded type hint disagrees with the snapshot
  ArityExceeded,      // observed call passes more arguments than declared
  MissingParameter,   // uses-param index past the parameter list
  MissingMember,      // uses-field / uses-enum-member on an absent member
};

struct LinkFailure {
  FailureKind kind;
  std::string reason;
};

// Failures the app would hit if its binary were run against s: unresolved
// imports first, then every usage fact inconsistent with the snapshot's
// declared shapes. Empty means the usage is satisfiable against s.
std::vector<LinkFailure> simulate_link(const AppUsage& app, const AbiSnapshot& s);

// Brute force over the released versions: every in-range version whose
// snapshot fails simulate_link, in release order.
std::vector<Version> oracle_incompatible_versions(const AppUsage& app,
                                                  const RequiredDep& required,
                                                  const LibraryHistory& h);

}  // namespace depscan

#endif
