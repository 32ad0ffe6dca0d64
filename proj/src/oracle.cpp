// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "oracle.hpp"

#include "abi_diff.hpp"

namespace depscan {
namespace {

// Definitions a name-keyed fact binds to: the defs the app's imports of
// that name resolve to, or — when the app records no such import — every
// definition carrying the name. Untagged imports follow the default rule.
std::vector<const SymbolDef*> resolve_fact_defs(const AppUsage& app,
                                                const AbiSnapshot& s,
                                                const std::string& name) {
  std::vector<const ImportRef*> imports;
  for (const ImportRef& imp : app.imports)
    if (imp.name == name) imports.push_back(&imp);

  std::vector<const SymbolDef*> defs;
  for (const auto& [key, def] : s.symbols) {
    if (key.name != name) continue;
    if (imports.empty()) {
      defs.push_back(&def);
      continue;
    }
    for (const ImportRef* imp : imports)
      if (import_matches(*imp, key, def.is_default)) {
        defs.push_back(&def);
        break;
      }
  }
  return defs;
}

bool texts_equal(const std::string& a, const std::string& b) {
  return normalize_type_text(a) == normalize_type_text(b);
}

const TypeMember* find_member(const AbiSnapshot& s, const std::string& type,
                              const std::string& member) {
  auto it = s.types.find(type);
  if (it == s.types.end()) return nullptr;
  for (const TypeMember& m : it->second.members)
    if (m.name == member) return &m;
  return nullptr;
}

void check_symbol_fact(const UsageFact& fact, const AppUsage& app,
                       const AbiSnapshot& s, std::vector<LinkFailure>& out) {
  std::vector<const SymbolDef*> defs = resolve_fact_defs(app, s, fact.symbol);
  if (defs.empty()) {
    out.push_back({FailureKind::MissingSymbol,
                   fact_kind_name(fact.kind) + " fact on " + fact.symbol +
                       " but no such symbol is defined"});
    return;
  }
  for (const SymbolDef* def : defs) {
    bool wants_function = fact.kind != FactKind::VarTypeHint;
    if ((def->kind == SymbolKind::Function) != wants_function) {
      out.push_back({FailureKind::SymbolKindChanged,
                     fact.symbol + " is not a " +
                         (wants_function ? "function" : "variable") +
                         " in this release"});
      continue;
    }
    switch (fact.kind) {
      case FactKind::UsesReturnValue:
        if (!def->return_type)
          out.push_back({FailureKind::VoidReturnUsed,
                         fact.symbol + "() returns void here but its value is used"});
        break;
      case FactKind::Calls:
        if (fact.arity > def->params.size())
          out.push_back({FailureKind::ArityExceeded,
                         fact.symbol + "() is called with " +
                             std::to_string(fact.arity) + " arguments but takes " +
                             std::to_string(def->params.size())});
        break;
      case FactKind::UsesParam:
        if (fact.index >= def->params.size())
          out.push_back({FailureKind::MissingParameter,
                         fact.symbol + "() has no parameter at index " +
                             std::to_string(fact.index)});
        break;
      case FactKind::ReturnTypeHint:
        if (!def->return_type || !texts_equal(*def->return_type, fact.text))
          out.push_back({FailureKind::TypeMismatch,
                         fact.symbol + "() does not return " + fact.text + " here"});
        break;
      case FactKind::ParamTypeHint:
        if (fact.index >= def->params.size())
          out.push_back({FailureKind::MissingParameter,
                         fact.symbol + "() has no parameter at index " +
                             std::to_string(fact.index)});
        else if (!texts_equal(def->params[fact.index], fact.text))
          out.push_back({FailureKind::TypeMismatch,
                         fact.symbol + "() parameter " + std::to_string(fact.index) +
                             " is not " + fact.text + " here"});
        break;
      case FactKind::VarTypeHint:
        if (!texts_equal(def->var_type, fact.text))
          out.push_back({FailureKind::TypeMismatch,
                         fact.symbol + " does not have type " + fact.text + " here"});
        break;
      default:
        break;
    }
  }
}

void check_type_fact(const UsageFact& fact, const AbiSnapshot& s,
                     std::vector<LinkFailure>& out) {
  const TypeMember* m = find_member(s, fact.type_name, fact.member);
  switch (fact.kind) {
    case FactKind::UsesField:
    case FactKind::UsesEnumMember:
      if (!m)
        out.push_back({FailureKind::MissingMember,
                       fact.type_name + "." + fact.member + " does not exist here"});
      break;
    case FactKind::FieldTypeHint:
      if (!m)
        out.push_back({FailureKind::MissingMember,
                       fact.type_name + "." + fact.member + " does not exist here"});
      else if (!m->type || !texts_equal(*m->type, fact.text))
        out.push_back({FailureKind::TypeMismatch,
                       fact.type_name + "." + fact.member + " is not " + fact.text +
                           " here"});
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<LinkFailure> simulate_link(const AppUsage& app, const AbiSnapshot& s) {
  std::vector<LinkFailure> failures;

  for (const ImportRef& imp : app.imports) {
    bool resolved = false;
    for (const auto& [key, def] : s.symbols)
      if (import_matches(imp, key, def.is_default)) {
        resolved = true;
        break;
      }
    if (!resolved)
      failures.push_back({FailureKind::MissingSymbol,
                          "undefined symbol " + imp.name +
                              (imp.version_tag ? "@" + *imp.version_tag : "")});
  }

  for (const UsageFact& fact : app.facts) {
    switch (fact.kind) {
      case FactKind::UsesField:
      case FactKind::UsesEnumMember:
      case FactKind::FieldTypeHint:
        check_type_fact(fact, s, failures);
        break;
      default:
        check_symbol_fact(fact, app, s, failures);
        break;
    }
  }
  return failures;
}

std::vector<Version> oracle_incompatible_versions(const AppUsage& app,
                                                  const RequiredDep& required,
                                                  const LibraryHistory& h) {
  std::vector<Version> out;
  for (const AbiSnapshot& s : h.releases) {
    if (!range_contains(required.range, s.version)) continue;
    if (!simulate_link(app, s).empty()) out.push_back(s.version);
  }
  return out;
}

}  // namespace depscan
