// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#include "abi_model.hpp"

#include <fstream>

namespace depscan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw LoadError(context + ": " + message);
}

const json& require_field(const json& obj, const char* field, const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end()) fail(context, std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& context) {
  const json& v = require_field(obj, field, context);
  if (!v.is_string()) fail(context, std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* field,
                                           const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(context, std::string("field '") + field + "' must be a string or null");
  return it->get<std::string>();
}

SymbolDef symbol_from_json(const json& entry, const std::string& context) {
  if (!entry.is_object()) fail(context, "symbol entry must be an object");

  SymbolDef def;
  def.key.name = require_string(entry, "name", context);
  if (def.key.name.empty()) fail(context, "symbol name must be non-empty");
  def.key.version_tag = optional_string(entry, "version_tag", context);
  if (def.key.version_tag && def.key.version_tag->empty())
    fail(context, "version_tag must be non-empty or null");

  if (auto it = entry.find("default"); it != entry.end()) {
    if (!it->is_boolean()) fail(context, "field 'default' must be a boolean");
    def.is_default = it->get<bool>();
  }
  if (def.is_default && !def.key.version_tag)
    fail(context, "default flag requires a version_tag (the '@@' form is always tagged)");

  std::string kind = require_string(entry, "kind", context);
  if (kind == "function") {
    def.kind = SymbolKind::Function;
    def.return_type = optional_string(entry, "return", context);
    if (auto it = entry.find("params"); it != entry.end() && !it->is_null()) {
      if (!it->is_array()) fail(context, "field 'params' must be an array of strings");
      for (const auto& p : *it) {
        if (!p.is_string()) fail(context, "field 'params' must be an array of strings");
        def.params.push_back(p.get<std::string>());
      }
    }
    if (auto vt = optional_string(entry, "var_type", context))
      fail(context, "function symbol must not carry 'var_type'");
  } else if (kind == "variable") {
    def.kind = SymbolKind::Variable;
    auto vt = optional_string(entry, "var_type", context);
    if (!vt) fail(context, "variable symbol requires 'var_type'");
    def.var_type = *vt;
    if (optional_string(entry, "return", context))
      fail(context, "variable symbol must not carry 'return'");
    if (auto it = entry.find("params");
        it != entry.end() && !(it->is_null() || (it->is_array() && it->empty())))
      fail(context, "variable symbol must not carry 'params'");
  } else {
    fail(context, "kind must be 'function' or 'variable', got '" + kind + "'");
  }
  return def;
}

TypeDef type_from_json(const json& entry, const std::string& context) {
  if (!entry.is_object()) fail(context, "type entry must be an object");

  TypeDef def;
  def.name = require_string(entry, "name", context);
  if (def.name.empty()) fail(context, "type name must be non-empty");

  std::string kind = require_string(entry, "kind", context);
  if (kind == "enum") def.kind = TypeKind::Enum;
  else if (kind == "struct") def.kind = TypeKind::Struct;
  else if (kind == "union") def.kind = TypeKind::Union;
  else if (kind == "class") def.kind = TypeKind::Class;
  else fail(context, "type kind must be enum/struct/union/class, got '" + kind + "'");

  const json& members = require_field(entry, "members", context);
  if (!members.is_array()) fail(context, "field 'members' must be an array");

  std::size_t index = 0;
  for (const auto& m : members) {
    std::string mctx = context + ".members[" + std::to_string(index) + "]";
    if (!m.is_object()) fail(mctx, "member must be an object");
    TypeMember member;
    member.name = require_string(m, "name", mctx);
    if (member.name.empty()) fail(mctx, "member name must be non-empty");
    if (auto it = m.find("value"); it != m.end() && !it->is_null()) {
      if (!it->is_number_integer()) fail(mctx, "field 'value' must be an integer or null");
      member.value = it->get<long long>();
    }
    member.type = optional_string(m, "type", mctx);

    if (def.kind == TypeKind::Enum) {
      if (member.type) fail(mctx, "enum member must not carry a field type");
    } else {
      if (!member.type) fail(mctx, "field member requires 'type'");
      if (member.value) fail(mctx, "field member must not carry 'value'");
    }
    for (const auto& existing : def.members) {
      if (existing.name == member.name)
        fail(mctx, "duplicate member name '" + member.name + "'");
    }
    def.members.push_back(std::move(member));
    ++index;
  }
  return def;
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw LoadError("'" + path.string() + "': " + e.what());
  }
  return doc;
}

}  // namespace

std::string symbol_key_text(const SymbolKey& key) {
  if (key.version_tag) return key.name + "@" + *key.version_tag;
  return key.name;
}

std::string type_kind_text(TypeKind k) {
  switch (k) {
    case TypeKind::Enum: return "enum";
    case TypeKind::Struct: return "struct";
    case TypeKind::Union: return "union";
    case TypeKind::Class: return "class";
  }
  return "?";
}

AbiSnapshot snapshot_from_json(const json& doc, const std::string& context) {
  if (!doc.is_object()) fail(context, "snapshot must be a JSON object");

  AbiSnapshot s;
  s.library = require_string(doc, "library", context);
  if (s.library.empty()) fail(context, "library name must be non-empty");
  try {
    s.version = parse_version(require_string(doc, "version", context));
  } catch (const ParseError& e) {
    fail(context, e.what());
  }
  s.soname = require_string(doc, "soname", context);
  if (s.soname.empty()) fail(context, "soname must be non-empty");

  const json& symbols = require_field(doc, "symbols", context);
  if (!symbols.is_array()) fail(context, "field 'symbols' must be an array");
  std::size_t index = 0;
  for (const auto& entry : symbols) {
    std::string sctx = context + ".symbols[" + std::to_string(index) + "]";
    SymbolDef def = symbol_from_json(entry, sctx);
    if (s.symbols.contains(def.key))
      fail(sctx, "duplicate symbol key '" + symbol_key_text(def.key) + "'");
    if (def.is_default) {
      for (const auto& [key, other] : s.symbols) {
        if (key.name == def.key.name && other.is_default)
          fail(sctx, "second default-version entry for symbol name '" + def.key.name + "'");
      }
    }
    s.symbols.emplace(def.key, std::move(def));
    ++index;
  }

  const json& types = require_field(doc, "types", context);
  if (!types.is_array()) fail(context, "field 'types' must be an array");
  index = 0;
  for (const auto& entry : types) {
    std::string tctx = context + ".types[" + std::to_string(index) + "]";
    TypeDef def = type_from_json(entry, tctx);
    if (s.types.contains(def.name)) fail(tctx, "duplicate type name '" + def.name + "'");
    s.types.emplace(def.name, std::move(def));
    ++index;
  }
  return s;
}

AbiSnapshot load_snapshot(const std::filesystem::path& path) {
  return snapshot_from_json(parse_file(path), path.string());
}

nlohmann::ordered_json snapshot_to_json(const AbiSnapshot& s) {
  nlohmann::ordered_json doc;
  doc["library"] = s.library;
  doc["version"] = render_version(s.version);
  doc["soname"] = s.soname;

  auto& symbols = doc["symbols"] = nlohmann::ordered_json::array();
  for (const auto& [key, def] : s.symbols) {
    nlohmann::ordered_json entry;
    entry["name"] = key.name;
    entry["version_tag"] = key.version_tag ? json(*key.version_tag) : json(nullptr);
    entry["default"] = def.is_default;
    if (def.kind == SymbolKind::Function) {
      entry["kind"] = "function";
      entry["return"] = def.return_type ? json(*def.return_type) : json(nullptr);
      entry["params"] = def.params;
      entry["var_type"] = nullptr;
    } else {
      entry["kind"] = "variable";
      entry["return"] = nullptr;
      entry["params"] = json::array();
      entry["var_type"] = def.var_type;
    }
    symbols.push_back(std::move(entry));
  }

  auto& types = doc["types"] = nlohmann::ordered_json::array();
  for (const auto& [name, def] : s.types) {
    nlohmann::ordered_json entry;
    entry["name"] = name;
    entry["kind"] = type_kind_text(def.kind);
    auto& members = entry["members"] = nlohmann::ordered_json::array();
    for (const auto& m : def.members) {
      nlohmann::ordered_json me;
      me["name"] = m.name;
      me["value"] = m.value ? json(*m.value) : json(nullptr);
      me["type"] = m.type ? json(*m.type) : json(nullptr);
      members.push_back(std::move(me));
    }
    types.push_back(std::move(entry));
  }
  return doc;
}

bool operator==(const SymbolDef& a, const SymbolDef& b) {
  return a.key == b.key && a.is_default == b.is_default && a.kind == b.kind &&
         a.return_type == b.return_type && a.params == b.params && a.var_type == b.var_type;
}

bool operator==(const TypeDef& a, const TypeDef& b) {
  if (a.name != b.name || a.kind != b.kind || a.members.size() != b.members.size()) return false;
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    const auto& ma = a.members[i];
    const auto& mb = b.members[i];
    if (ma.name != mb.name || ma.value != mb.value || ma.type != mb.type) return false;
  }
  return true;
}

bool operator==(const AbiSnapshot& a, const AbiSnapshot& b) {
  return a.library == b.library && compare_versions(a.version, b.version) == 0 &&
         a.soname == b.soname && a.symbols == b.symbols && a.types == b.types;
}

LibraryHistory history_from_snapshots(std::string library, std::vector<AbiSnapshot> releases) {
  LibraryHistory h;
  h.library = std::move(library);
  h.releases = std::move(releases);
  for (std::size_t i = 0; i < h.releases.size(); ++i) {
    if (h.releases[i].library != h.library)
      throw LoadError("history '" + h.library + "': release " + std::to_string(i) +
                      " belongs to library '" + h.releases[i].library + "'");
    if (i > 0 &&
        compare_versions(h.releases[i - 1].version, h.releases[i].version) >= 0)
      throw LoadError("history '" + h.library + "': release versions must strictly increase, " +
                      render_version(h.releases[i - 1].version) + " then " +
                      render_version(h.releases[i].version));
  }
  return h;
}

LibraryHistory load_history(const std::filesystem::path& manifest_path) {
  json doc = parse_file(manifest_path);
  std::string context = manifest_path.string();
  if (!doc.is_object()) fail(context, "history manifest must be a JSON object");

  std::string library = require_string(doc, "library", context);
  const json& releases = require_field(doc, "releases", context);
  if (!releases.is_array() || releases.empty())
    fail(context, "field 'releases' must be a non-empty array of snapshot paths");

  std::filesystem::path base = manifest_path.parent_path();
  std::vector<AbiSnapshot> snapshots;
  for (const auto& entry : releases) {
    if (!entry.is_string()) fail(context, "release entries must be path strings");
    std::filesystem::path p = entry.get<std::string>();
    if (p.is_relative()) p = base / p;
    snapshots.push_back(load_snapshot(p));
  }
  return history_from_snapshots(std::move(library), std::move(snapshots));
}

std::optional<std::size_t> find_release(const LibraryHistory& h, const Version& v) {
  for (std::size_t i = 0; i < h.releases.size(); ++i) {
    if (compare_versions(h.releases[i].version, v) == 0) return i;
  }
  return std::nullopt;
}

std::vector<Version> release_versions(const LibraryHistory& h) {
  std::vector<Version> out;
  out.reserve(h.releases.size());
  for (const auto& r : h.releases) out.push_back(r.version);
  return out;
}

std::vector<int> soname_groups(const LibraryHistory& h) {
  std::vector<int> groups;
  groups.reserve(h.releases.size());
  int group = 0;
  for (std::size_t i = 0; i < h.releases.size(); ++i) {
    if (i > 0 && h.releases[i].soname != h.releases[i - 1].soname) ++group;
    groups.push_back(group);
  }
  return groups;
}

std::vector<std::string> type_ref_tokens(std::string_view type_text) {
  std::vector<std::string> tokens;
  std::string current;
  auto is_ident = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  for (char c : type_text) {
    if (is_ident(c)) {
      current += c;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

bool references_type(std::string_view type_text, const std::string& type_name) {
  for (const auto& token : type_ref_tokens(type_text)) {
    if (token == type_name) return true;
  }
  return false;
}

}  // namespace

std::vector<SymbolKey> symbols_using_type(const AbiSnapshot& s, const std::string& type_name) {
  if (!s.types.contains(type_name))
    throw std::invalid_argument("unknown type '" + type_name + "' in snapshot " + s.library + " " +
                                render_version(s.version));

  std::vector<SymbolKey> out;
  for (const auto& [key, def] : s.symbols) {
    bool uses = false;
    if (def.kind == SymbolKind::Function) {
      if (def.return_type && references_type(*def.return_type, type_name)) uses = true;
      for (const auto& p : def.params) {
        if (references_type(p, type_name)) uses = true;
      }
    } else {
      uses = references_type(def.var_type, type_name);
    }
    if (uses) out.push_back(key);
  }
  return out;
}

}  // namespace depscan
