// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_USAGE_HPP
#define DEPSCAN_USAGE_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abi_diff.hpp"
#include "abi_model.hpp"
#include "version.hpp"

namespace depscan {

enum class FactKind {
  UsesReturnValue,
  Calls,
  UsesParam,
  UsesField,
  UsesEnumMember,
  ReturnTypeHint,
  ParamTypeHint,
  FieldTypeHint,
  VarTypeHint,
};

std::string fact_kind_name(FactKind k);

// One observation about how the app consumes a library element. Facts name
// elements, never library versions; hint texts are stored normalized.
struct UsageFact {
  FactKind kind = FactKind::Calls;
  std::string symbol;     // symbol-arm facts
  std::string type_name;  // type-arm facts
  std::string member;     // field or enum-member name
  std::string text;       // type-hint text
  std::size_t arity = 0;  // calls
  std::size_t index = 0;  // uses_param / param_type_hint

  friend auto operator<=>(const UsageFact&, const UsageFact&) = default;
};

struct ImportRef {
  std::string name;
  std::optional<std::string> version_tag;

  friend auto operator<=>(const ImportRef&, const ImportRef&) = default;
};

struct AppUsage {
  std::string app;
  Version version;
  std::set<ImportRef> imports;
  std::set<UsageFact> facts;
};

// Dynamic-linker matching: an unversioned import binds to the untagged
// definition or the default-tagged one; a versioned import binds only to
// the exact tag.
bool import_matches(const ImportRef& import, const SymbolKey& def_key, bool def_is_default);

// True when any import of the app binds to this definition.
bool app_imports_symbol(const AppUsage& app, const SymbolDef& def);

// True when any import carries this name, regardless of tags. Used where
// only the element name is known (type-usage filtering).
bool app_imports_name(const AppUsage& app, const std::string& name);

// Fact accessors; hint getters return the normalized text.
bool uses_return_value(const AppUsage& app, const std::string& symbol);
std::optional<std::size_t> max_call_arity(const AppUsage& app, const std::string& symbol);
bool has_uses_param(const AppUsage& app, const std::string& symbol, std::size_t index);
bool has_uses_field(const AppUsage& app, const std::string& type, const std::string& field);
bool has_uses_enum_member(const AppUsage& app, const std::string& type, const std::string& member);
std::optional<std::string> return_type_hint(const AppUsage& app, const std::string& symbol);
std::optional<std::string> param_type_hint(const AppUsage& app, const std::string& symbol,
                                           std::size_t index);
std::optional<std::string> field_type_hint(const AppUsage& app, const std::string& type,
                                           const std::string& field);
std::optional<std::string> var_type_hint(const AppUsage& app, const std::string& symbol);

// Loads and validates a usage-facts file. A uses_param/param_type_hint
// index must stay below the largest recorded call arity for that symbol.
AppUsage load_usage_facts(const std::filesystem::path& path);
AppUsage usage_from_json(const nlohmann::json& doc, const std::string& context);
nlohmann::ordered_json usage_to_json(const AppUsage& app);

// Best-effort lexical scan of C-like source. Emits only facts about the
// given elements; enlarging the element set never removes facts. Degrades
// to fewer facts on unparseable input, never fails.
std::set<UsageFact> scan_source_usage(std::string_view source,
                                      const std::vector<ElementRef>& elements);

}  // namespace depscan

#endif
