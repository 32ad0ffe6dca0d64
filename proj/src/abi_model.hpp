// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_ABI_MODEL_HPP
#define DEPSCAN_ABI_MODEL_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "version.hpp"

namespace depscan {

// Symbols with different version tags are different symbols; the tag is
// part of the identity, the default ('@@') flag is not.
struct SymbolKey {
  std::string name;
  std::optional<std::string> version_tag;

  friend auto operator<=>(const SymbolKey&, const SymbolKey&) = default;
};

// "snd_tplg_new@ALSA_0.9" or plain "gzgetc".
std::string symbol_key_text(const SymbolKey& key);

enum class SymbolKind { Function, Variable };

struct SymbolDef {
  SymbolKey key;
  bool is_default = false;
  SymbolKind kind = SymbolKind::Function;
  std::optional<std::string> return_type;  // functions; nullopt means void
  std::vector<std::string> params;         // functions
  std::string var_type;                    // variables
};

enum class TypeKind { Enum, Struct, Union, Class };

std::string type_kind_text(TypeKind k);

struct TypeMember {
  std::string name;
  std::optional<long long> value;   // enum members
  std::optional<std::string> type;  // struct/union/class fields
};

struct TypeDef {
  std::string name;
  TypeKind kind = TypeKind::Struct;
  std::vector<TypeMember> members;  // order is significant for fields
};

struct AbiSnapshot {
  std::string library;
  Version version;
  std::string soname;
  std::map<SymbolKey, SymbolDef> symbols;
  std::map<std::string, TypeDef> types;
};

struct LibraryHistory {
  std::string library;
  std::vector<AbiSnapshot> releases;  // strictly increasing versions
};

// Loads and validates one snapshot file. Violations are rejected, never
// repaired; error messages point at the offending entry.
AbiSnapshot load_snapshot(const std::filesystem::path& path);
AbiSnapshot snapshot_from_json(const nlohmann::json& doc, const std::string& context);

// Inverse of load: reloading the serialized form yields an equal snapshot.
nlohmann::ordered_json snapshot_to_json(const AbiSnapshot& s);

bool operator==(const SymbolDef& a, const SymbolDef& b);
bool operator==(const TypeDef& a, const TypeDef& b);
bool operator==(const AbiSnapshot& a, const AbiSnapshot& b);

// Loads a history manifest {"library", "releases": [path, ...]}; snapshot
// paths resolve relative to the manifest's directory.
LibraryHistory load_history(const std::filesystem::path& manifest_path);
LibraryHistory history_from_snapshots(std::string library, std::vector<AbiSnapshot> releases);

// Index of the release whose version compares equal to v.
std::optional<std::size_t> find_release(const LibraryHistory& h, const Version& v);

std::vector<Version> release_versions(const LibraryHistory& h);

// Maximal runs of releases sharing a soname, numbered from zero in
// release order. Diffs never cross a group boundary.
std::vector<int> soname_groups(const LibraryHistory& h);

// Identifier tokens of a type-ref text; tokens matching a declared type
// name constitute a reference, anything else is builtin/opaque.
std::vector<std::string> type_ref_tokens(std::string_view type_text);

// Symbols whose signature (return, parameter, or variable type) directly
// references the named type. Throws when the type is not declared.
std::vector<SymbolKey> symbols_using_type(const AbiSnapshot& s, const std::string& type_name);

}  // namespace depscan

#endif
