// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "detect.hpp"

namespace depscan {
namespace {

// True when some import of the app matches `key` as defined in the release
// snapshots at either end of the change. The definition's default flag
// matters for untagged imports, so the lookup goes through the snapshot.
bool imports_symbol_at_ends(const AppUsage& app, const SymbolKey& key,
                            const IncompatibleChange& ic,
                            const LibraryHistory& h) {
  for (const Version* v : {&ic.v_old, &ic.v_new}) {
    auto idx = find_release(h, *v);
    if (!idx) continue;
    const AbiSnapshot& snap = h.releases[*idx];
    auto it = snap.symbols.find(key);
    if (it != snap.symbols.end() && app_imports_symbol(app, it->second))
      return true;
  }
  // The key may be absent from both snapshots only in the degenerate case
  // of a change whose versions are not in the history; fall back to the
  // no-default reading of the matching rule.
  for (const ImportRef& imp : app.imports)
    if (import_matches(imp, key, false)) return true;
  return false;
}

bool uses_type_element(const AppUsage& app, const IncompatibleChange& ic,
                       const LibraryHistory& h) {
  for (const Version* v : {&ic.v_old, &ic.v_new}) {
    auto idx = find_release(h, *v);
    if (!idx) continue;
    const AbiSnapshot& snap = h.releases[*idx];
    if (!snap.types.count(ic.element.type_name)) continue;
    for (const SymbolKey& key : symbols_using_type(snap, ic.element.type_name)) {
      auto it = snap.symbols.find(key);
      if (it != snap.symbols.end() && app_imports_symbol(app, it->second))
        return true;
    }
  }
  return false;
}

DetectOutcome no_bug(std::string reason) {
  DetectOutcome out;
  out.reason = std::move(reason);
  return out;
}

DetectOutcome bug_at_old(const IncompatibleChange& ic, std::string reason) {
  DetectOutcome out;
  out.bug_old = ic.v_old;
  out.reason = std::move(reason);
  return out;
}

DetectOutcome bug_at_new(const IncompatibleChange& ic, std::string reason) {
  DetectOutcome out;
  out.bug_new = ic.v_new;
  out.reason = std::move(reason);
  return out;
}

DetectOutcome undecided(std::string reason) {
  DetectOutcome out;
  out.undecidable = true;
  out.reason = std::move(reason);
  return out;
}

// Shared rule for the four member add/remove kinds: the bug side exists
// only when the app demonstrably uses the member.
DetectOutcome member_rule(const IncompatibleChange& ic, bool used,
                          const char* what) {
  bool adds = ic.direction == Direction::Forward;
  if (!used)
    return no_bug(std::string(adds ? "added " : "removed ") + what +
                  " is not used by the application");
  if (adds)
    return bug_at_old(ic, std::string("application uses the ") + what +
                              " added in " + render_version(ic.v_new));
  return bug_at_new(ic, std::string("application uses the ") + what +
                            " removed in " + render_version(ic.v_new));
}

// Shared rule for the four type-change kinds: the side the app was built
// against is read off its recorded type hint.
DetectOutcome hint_rule(const IncompatibleChange& ic,
                        const std::optional<std::string>& hint,
                        const char* what) {
  if (!hint)
    return undecided(std::string("no ") + what +
                     " hint in usage facts; cannot tell which version the "
                     "application was built against");
  std::string h = normalize_type_text(*hint);
  if (ic.detail.old_text && h == normalize_type_text(*ic.detail.old_text))
    return bug_at_new(ic, std::string(what) + " hint \"" + *hint +
                              "\" matches the " + render_version(ic.v_old) + " side");
  if (ic.detail.new_text && h == normalize_type_text(*ic.detail.new_text))
    return bug_at_old(ic, std::string(what) + " hint \"" + *hint +
                              "\" matches the " + render_version(ic.v_new) + " side");
  return undecided(std::string(what) + " hint \"" + *hint +
                   "\" matches neither side of the change");
}

// Parameter use at `index`: an explicit uses-param fact, or any observed
// call passing an argument at that position.
bool param_used(const AppUsage& app, const std::string& symbol,
                std::size_t index) {
  if (has_uses_param(app, symbol, index)) return true;
  auto arity = max_call_arity(app, symbol);
  return arity && *arity >= index + 1;
}

}  // namespace

bool filter_phase(const AppUsage& app, const RequiredDep& required,
                  const IncompatibleChange& ic, const LibraryHistory& h) {
  if (!range_contains(required.range, ic.v_old) &&
      !range_contains(required.range, ic.v_new))
    return false;
  if (ic.element.is_symbol())
    return imports_symbol_at_ends(app, *ic.element.symbol, ic, h);
  return uses_type_element(app, ic, h);
}

DetectOutcome decide_side(const IncompatibleChange& ic, const AppUsage& app) {
  const ElementRef& ele = ic.element;
  const std::string symbol_name = ele.is_symbol() ? ele.symbol->name : "";
  switch (ic.kind) {
    case ChangeKind::EnumAddsMember:
    case ChangeKind::EnumRemovesMember:
      return member_rule(
          ic, has_uses_enum_member(app, ele.type_name, *ele.member_name),
          "enum member");
    case ChangeKind::EnumChangesMemberValue:
      return undecided(
          "enum member values cannot be inferred from source usage");
    case ChangeKind::StructAddsField:
    case ChangeKind::StructRemovesField:
      return member_rule(ic,
                         has_uses_field(app, ele.type_name, *ele.member_name),
                         "field");
    case ChangeKind::StructChangesFieldType:
      return hint_rule(ic, field_type_hint(app, ele.type_name, *ele.member_name),
                       "field type");
    case ChangeKind::StructChangesFieldOrder:
      return undecided("field order cannot be inferred from source usage");
    case ChangeKind::VariableAdds:
    case ChangeKind::FunctionAdds:
      return bug_at_old(ic, "imported symbol does not exist before " +
                                render_version(ic.v_new));
    case ChangeKind::VariableRemoves:
    case ChangeKind::FunctionRemoves:
      return bug_at_new(ic, "imported symbol is removed in " + render_version(ic.v_new));
    case ChangeKind::VariableChangesType:
      return hint_rule(ic, var_type_hint(app, symbol_name), "variable type");
    case ChangeKind::FunctionAddsParameter:
    case ChangeKind::FunctionRemovesParameter:
      return member_rule(ic, param_used(app, symbol_name, *ic.detail.param_index),
                         "parameter");
    case ChangeKind::FunctionChangesParameterType:
      return hint_rule(ic, param_type_hint(app, symbol_name, *ic.detail.param_index),
                       "parameter type");
    case ChangeKind::FunctionAddsReturnValue:
    case ChangeKind::FunctionRemovesReturnValue:
      return member_rule(ic, uses_return_value(app, symbol_name),
                         "return value");
    case ChangeKind::FunctionChangesReturnType:
      return hint_rule(ic, return_type_hint(app, symbol_name), "return type");
  }
  return undecided("unknown change kind");
}

DetectOutcome detect(const AppUsage& app, const RequiredDep& required,
                     const IncompatibleChange& ic, const LibraryHistory& h) {
  if (!filter_phase(app, required, ic, h)) return no_bug("filtered");
  DetectOutcome out = decide_side(ic, app);
  if (out.bug_old && !range_contains(required.range, *out.bug_old)) {
    out.reason += "; bug version " + render_version(*out.bug_old) +
                  " is outside the accepted range";
    out.bug_old.reset();
  }
  if (out.bug_new && !range_contains(required.range, *out.bug_new)) {
    out.reason += "; bug version " + render_version(*out.bug_new) +
                  " is outside the accepted range";
    out.bug_new.reset();
  }
  return out;
}

}  // namespace depscan
