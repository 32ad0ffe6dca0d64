// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#include "abi_diff.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <tuple>

namespace depscan {

int change_kind_id(ChangeKind k) { return static_cast<int>(k); }

std::string change_kind_name(ChangeKind k) {
  switch (k) {
    case ChangeKind::EnumAddsMember: return "enum-adds-member";
    case ChangeKind::EnumRemovesMember: return "enum-removes-member";
    case ChangeKind::EnumChangesMemberValue: return "enum-changes-member-value";
    case ChangeKind::StructAddsField: return "struct-adds-field";
    case ChangeKind::StructRemovesField: return "struct-removes-field";
    case ChangeKind::StructChangesFieldType: return "struct-changes-field-type";
    case ChangeKind::StructChangesFieldOrder: return "struct-changes-field-order";
    case ChangeKind::VariableAdds: return "variable-adds";
    case ChangeKind::VariableRemoves: return "variable-removes";
    case ChangeKind::VariableChangesType: return "variable-changes-type";
    case ChangeKind::FunctionAdds: return "function-adds";
    case ChangeKind::FunctionRemoves: return "function-removes";
    case ChangeKind::FunctionAddsParameter: return "function-adds-parameter";
    case ChangeKind::FunctionRemovesParameter: return "function-removes-parameter";
    case ChangeKind::FunctionChangesParameterType: return "function-changes-parameter-type";
    case ChangeKind::FunctionAddsReturnValue: return "function-adds-return-value";
    case ChangeKind::FunctionRemovesReturnValue: return "function-removes-return-value";
    case ChangeKind::FunctionChangesReturnType: return "function-changes-return-type";
  }
  return "?";
}

std::string direction_text(Direction d) {
  return d == Direction::Backward ? "backward" : "forward";
}

ElementRef symbol_element(SymbolKey key) {
  ElementRef e;
  e.symbol = std::move(key);
  return e;
}

ElementRef type_element(std::string type_name, TypeKind kind, std::string member_name) {
  ElementRef e;
  e.type_name = std::move(type_name);
  e.type_kind = kind;
  e.member_name = std::move(member_name);
  return e;
}

std::string element_text(const ElementRef& e) {
  if (e.is_symbol()) return symbol_key_text(*e.symbol);
  std::string out = e.type_name;
  if (e.member_name) out += "." + *e.member_name;
  return out;
}

bool operator==(const IncompatibleChange& a, const IncompatibleChange& b) {
  return a.library == b.library && compare_versions(a.v_old, b.v_old) == 0 &&
         compare_versions(a.v_new, b.v_new) == 0 && a.kind == b.kind &&
         a.direction == b.direction && a.element == b.element && a.detail == b.detail;
}

bool change_less(const IncompatibleChange& a, const IncompatibleChange& b) {
  if (int c = a.library.compare(b.library); c != 0) return c < 0;
  if (int c = compare_versions(a.v_old, b.v_old); c != 0) return c < 0;
  if (int c = compare_versions(a.v_new, b.v_new); c != 0) return c < 0;
  if (a.direction != b.direction) return a.direction < b.direction;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.element != b.element) return a.element < b.element;
  return a.detail < b.detail;
}

std::string normalize_type_text(std::string_view text) {
  auto is_punct = [](char ch) {
    return std::string_view("*&<>,()[]").find(ch) != std::string_view::npos;
  };
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space && !is_punct(ch) && !is_punct(out.back())) out += ' ';
    pending_space = false;
    out += ch;
  }
  return out;
}

namespace {

std::string signature_text(const SymbolDef& def) {
  if (def.kind == SymbolKind::Variable) return normalize_type_text(def.var_type);
  std::string out = def.return_type ? normalize_type_text(*def.return_type) : "void";
  out += "(";
  for (std::size_t i = 0; i < def.params.size(); ++i) {
    if (i > 0) out += ",";
    out += normalize_type_text(def.params[i]);
  }
  out += ")";
  return out;
}

IncompatibleChange make_change(const AbiSnapshot& old_side, const AbiSnapshot& new_side,
                               ChangeKind kind, ElementRef element, ChangeDetail detail) {
  IncompatibleChange c;
  c.library = old_side.library;
  c.v_old = old_side.version;
  c.v_new = new_side.version;
  c.kind = kind;
  c.direction = Direction::Backward;
  c.element = std::move(element);
  c.detail = std::move(detail);
  return c;
}

void diff_symbol_pair(const AbiSnapshot& a, const AbiSnapshot& b, const SymbolDef& da,
                      const SymbolDef& db, std::vector<IncompatibleChange>& out) {
  if (da.kind != db.kind) {
    // A kind flip is remove+add; only the removal is backward-visible.
    ChangeDetail detail;
    detail.old_text = signature_text(da);
    out.push_back(make_change(a, b,
                              da.kind == SymbolKind::Function ? ChangeKind::FunctionRemoves
                                                              : ChangeKind::VariableRemoves,
                              symbol_element(da.key), std::move(detail)));
    return;
  }

  if (da.kind == SymbolKind::Variable) {
    std::string ta = normalize_type_text(da.var_type);
    std::string tb = normalize_type_text(db.var_type);
    if (ta != tb) {
      ChangeDetail detail;
      detail.old_text = ta;
      detail.new_text = tb;
      out.push_back(make_change(a, b, ChangeKind::VariableChangesType, symbol_element(da.key),
                                std::move(detail)));
    }
    return;
  }

  // Parameter list: positional type changes over the common prefix, then
  // suffix removals. Suffix additions are forward-only and fall out of the
  // reversed diff instead.
  std::size_t common = std::min(da.params.size(), db.params.size());
  for (std::size_t i = 0; i < common; ++i) {
    std::string ta = normalize_type_text(da.params[i]);
    std::string tb = normalize_type_text(db.params[i]);
    if (ta != tb) {
      ChangeDetail detail;
      detail.param_index = i;
      detail.old_text = ta;
      detail.new_text = tb;
      out.push_back(make_change(a, b, ChangeKind::FunctionChangesParameterType,
                                symbol_element(da.key), std::move(detail)));
    }
  }
  for (std::size_t i = common; i < da.params.size(); ++i) {
    ChangeDetail detail;
    detail.param_index = i;
    detail.old_text = normalize_type_text(da.params[i]);
    out.push_back(make_change(a, b, ChangeKind::FunctionRemovesParameter,
                              symbol_element(da.key), std::move(detail)));
  }

  bool old_ret = da.return_type.has_value();
  bool new_ret = db.return_type.has_value();
  if (old_ret && !new_ret) {
    ChangeDetail detail;
    detail.old_text = normalize_type_text(*da.return_type);
    out.push_back(make_change(a, b, ChangeKind::FunctionRemovesReturnValue,
                              symbol_element(da.key), std::move(detail)));
  } else if (old_ret && new_ret) {
    std::string ta = normalize_type_text(*da.return_type);
    std::string tb = normalize_type_text(*db.return_type);
    if (ta != tb) {
      ChangeDetail detail;
      detail.old_text = ta;
      detail.new_text = tb;
      out.push_back(make_change(a, b, ChangeKind::FunctionChangesReturnType,
                                symbol_element(da.key), std::move(detail)));
    }
  }
  // void -> T is the forward-only "adds return value".
}

void emit_member_removal(const AbiSnapshot& a, const AbiSnapshot& b, const TypeDef& type,
                         const TypeMember& member, std::vector<IncompatibleChange>& out) {
  ChangeDetail detail;
  ChangeKind kind;
  if (type.kind == TypeKind::Enum) {
    kind = ChangeKind::EnumRemovesMember;
    detail.old_value = member.value;
  } else {
    kind = ChangeKind::StructRemovesField;
    if (member.type) detail.old_text = normalize_type_text(*member.type);
  }
  out.push_back(make_change(a, b, kind, type_element(type.name, type.kind, member.name),
                            std::move(detail)));
}

void diff_type_pair(const AbiSnapshot& a, const AbiSnapshot& b, const TypeDef& ta,
                    const TypeDef& tb, std::vector<IncompatibleChange>& out) {
  if (ta.kind != tb.kind) {
    // Reclassifying a type is remove+add of every member.
    for (const auto& m : ta.members) emit_member_removal(a, b, ta, m, out);
    return;
  }

  auto find_member = [](const TypeDef& t, const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < t.members.size(); ++i) {
      if (t.members[i].name == name) return i;
    }
    return std::nullopt;
  };

  for (std::size_t ia = 0; ia < ta.members.size(); ++ia) {
    const TypeMember& ma = ta.members[ia];
    auto ib = find_member(tb, ma.name);
    if (!ib) {
      emit_member_removal(a, b, ta, ma, out);
      continue;
    }
    const TypeMember& mb = tb.members[*ib];

    if (ta.kind == TypeKind::Enum) {
      if (ma.value != mb.value) {
        ChangeDetail detail;
        detail.old_value = ma.value;
        detail.new_value = mb.value;
        out.push_back(make_change(a, b, ChangeKind::EnumChangesMemberValue,
                                  type_element(ta.name, ta.kind, ma.name), std::move(detail)));
      }
      continue;
    }

    std::string type_a = ma.type ? normalize_type_text(*ma.type) : "";
    std::string type_b = mb.type ? normalize_type_text(*mb.type) : "";
    if (type_a != type_b) {
      ChangeDetail detail;
      detail.old_text = type_a;
      detail.new_text = type_b;
      out.push_back(make_change(a, b, ChangeKind::StructChangesFieldType,
                                type_element(ta.name, ta.kind, ma.name), std::move(detail)));
    }
    if (ia != *ib) {
      ChangeDetail detail;
      detail.old_position = ia;
      detail.new_position = *ib;
      out.push_back(make_change(a, b, ChangeKind::StructChangesFieldOrder,
                                type_element(ta.name, ta.kind, ma.name), std::move(detail)));
    }
  }
}

ChangeKind forward_kind(ChangeKind reversed) {
  switch (reversed) {
    case ChangeKind::EnumRemovesMember: return ChangeKind::EnumAddsMember;
    case ChangeKind::StructRemovesField: return ChangeKind::StructAddsField;
    case ChangeKind::VariableRemoves: return ChangeKind::VariableAdds;
    case ChangeKind::FunctionRemoves: return ChangeKind::FunctionAdds;
    case ChangeKind::FunctionRemovesParameter: return ChangeKind::FunctionAddsParameter;
    case ChangeKind::FunctionRemovesReturnValue: return ChangeKind::FunctionAddsReturnValue;
    default: return reversed;  // the both-direction change kinds keep their id
  }
}

void sort_and_dedupe(std::vector<IncompatibleChange>& changes) {
  std::sort(changes.begin(), changes.end(), change_less);
  changes.erase(std::unique(changes.begin(), changes.end()), changes.end());
}

}  // namespace

std::vector<IncompatibleChange> diff_backward(const AbiSnapshot& a, const AbiSnapshot& b) {
  if (a.library != b.library)
    throw std::invalid_argument("cannot diff across libraries: '" + a.library + "' vs '" +
                                b.library + "'");

  std::vector<IncompatibleChange> out;

  for (const auto& [key, da] : a.symbols) {
    auto it = b.symbols.find(key);
    if (it == b.symbols.end()) {
      ChangeDetail detail;
      detail.old_text = signature_text(da);
      out.push_back(make_change(a, b,
                                da.kind == SymbolKind::Function ? ChangeKind::FunctionRemoves
                                                                : ChangeKind::VariableRemoves,
                                symbol_element(key), std::move(detail)));
      continue;
    }
    diff_symbol_pair(a, b, da, it->second, out);
  }

  for (const auto& [name, ta] : a.types) {
    auto it = b.types.find(name);
    if (it == b.types.end()) {
      // Whole-type disappearance decomposes into per-member removals so
      // every record maps to one rule-table row.
      for (const auto& m : ta.members) emit_member_removal(a, b, ta, m, out);
      continue;
    }
    diff_type_pair(a, b, ta, it->second, out);
  }

  sort_and_dedupe(out);
  return out;
}

std::vector<IncompatibleChange> diff_forward(const AbiSnapshot& a, const AbiSnapshot& b) {
  std::vector<IncompatibleChange> out = diff_backward(b, a);
  for (IncompatibleChange& c : out) {
    c.v_old = a.version;
    c.v_new = b.version;
    c.direction = Direction::Forward;
    c.kind = forward_kind(c.kind);
    std::swap(c.detail.old_text, c.detail.new_text);
    std::swap(c.detail.old_value, c.detail.new_value);
    std::swap(c.detail.old_position, c.detail.new_position);
  }
  sort_and_dedupe(out);
  return out;
}

std::vector<IncompatibleChange> collect_incompatible_changes(const LibraryHistory& h) {
  std::vector<IncompatibleChange> out;
  for (std::size_t i = 0; i + 1 < h.releases.size(); ++i) {
    const AbiSnapshot& lo = h.releases[i];
    const AbiSnapshot& hi = h.releases[i + 1];
    if (lo.soname != hi.soname) continue;
    auto backward = diff_backward(lo, hi);
    auto forward = diff_forward(lo, hi);
    out.insert(out.end(), backward.begin(), backward.end());
    out.insert(out.end(), forward.begin(), forward.end());
  }
  sort_and_dedupe(out);
  return out;
}

std::string describe_change(const IncompatibleChange& c) {
  auto symbol_text = [&]() -> std::string {
    const SymbolKey& key = *c.element.symbol;
    std::string out = key.name;
    bool is_function = change_kind_id(c.kind) >= 11;
    if (is_function) out += "()";
    if (key.version_tag) out += "@" + *key.version_tag;
    return out;
  };
  auto type_prefix = [&]() -> std::string {
    return type_kind_text(c.element.type_kind.value_or(TypeKind::Struct)) + " " +
           c.element.type_name;
  };
  auto member = [&]() -> std::string { return c.element.member_name.value_or("?"); };
  auto old_text = [&]() -> std::string { return c.detail.old_text.value_or("?"); };
  auto new_text = [&]() -> std::string { return c.detail.new_text.value_or("?"); };

  switch (c.kind) {
    case ChangeKind::EnumAddsMember:
      return type_prefix() + " adds " + member();
    case ChangeKind::EnumRemovesMember:
      return type_prefix() + " removes " + member();
    case ChangeKind::EnumChangesMemberValue: {
      std::string out = type_prefix() + " changes value of " + member();
      if (c.detail.old_value && c.detail.new_value)
        out += " from " + std::to_string(*c.detail.old_value) + " to " +
               std::to_string(*c.detail.new_value);
      return out;
    }
    case ChangeKind::StructAddsField:
      return type_prefix() + " adds " + member();
    case ChangeKind::StructRemovesField:
      return type_prefix() + " removes " + member();
    case ChangeKind::StructChangesFieldType:
      return type_prefix() + " changes type of " + member() + " from " + old_text() + " to " +
             new_text();
    case ChangeKind::StructChangesFieldOrder: {
      std::string out = type_prefix() + " changes field order of " + member();
      if (c.detail.old_position && c.detail.new_position)
        out += " (position " + std::to_string(*c.detail.old_position) + " to " +
               std::to_string(*c.detail.new_position) + ")";
      return out;
    }
    case ChangeKind::VariableAdds:
      return "Add " + symbol_text();
    case ChangeKind::VariableRemoves:
      return "Remove " + symbol_text();
    case ChangeKind::VariableChangesType:
      return symbol_text() + " changes type from " + old_text() + " to " + new_text();
    case ChangeKind::FunctionAdds:
      return "Add " + symbol_text();
    case ChangeKind::FunctionRemoves:
      return "Remove " + symbol_text();
    case ChangeKind::FunctionAddsParameter:
      return symbol_text() + " adds parameter " + new_text();
    case ChangeKind::FunctionRemovesParameter:
      return symbol_text() + " removes parameter " + old_text();
    case ChangeKind::FunctionChangesParameterType:
      return symbol_text() + " changes parameter type from " + old_text() + " to " + new_text();
    case ChangeKind::FunctionAddsReturnValue:
      return symbol_text() + " adds return value " + new_text();
    case ChangeKind::FunctionRemovesReturnValue:
      return symbol_text() + " removes return value " + old_text();
    case ChangeKind::FunctionChangesReturnType:
      return symbol_text() + " changes return value from " + old_text() + " to " + new_text();
  }
  return "?";
}

nlohmann::ordered_json change_to_json(const IncompatibleChange& c) {
  nlohmann::ordered_json doc;
  doc["library"] = c.library;
  doc["v_old"] = render_version(c.v_old);
  doc["v_new"] = render_version(c.v_new);
  doc["direction"] = direction_text(c.direction);
  doc["kind"] = change_kind_id(c.kind);
  doc["kind_name"] = change_kind_name(c.kind);

  nlohmann::ordered_json element;
  if (c.element.is_symbol()) {
    element["symbol"] = c.element.symbol->name;
    element["version_tag"] =
        c.element.symbol->version_tag ? nlohmann::json(*c.element.symbol->version_tag)
                                      : nlohmann::json(nullptr);
  } else {
    element["type"] = c.element.type_name;
    element["type_kind"] = type_kind_text(c.element.type_kind.value_or(TypeKind::Struct));
    element["member"] = c.element.member_name ? nlohmann::json(*c.element.member_name)
                                              : nlohmann::json(nullptr);
  }
  doc["element"] = std::move(element);

  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
  if (c.detail.old_text) detail["old"] = *c.detail.old_text;
  if (c.detail.new_text) detail["new"] = *c.detail.new_text;
  if (c.detail.param_index) detail["param_index"] = *c.detail.param_index;
  if (c.detail.old_value) detail["old_value"] = *c.detail.old_value;
  if (c.detail.new_value) detail["new_value"] = *c.detail.new_value;
  if (c.detail.old_position) detail["old_position"] = *c.detail.old_position;
  if (c.detail.new_position) detail["new_position"] = *c.detail.new_position;
  doc["detail"] = std::move(detail);

  doc["description"] = describe_change(c);
  return doc;
}

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw LoadError(context + ": " + message);
}

std::string require_string(const nlohmann::json& obj, const char* field,
                           const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string())
    fail(context, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* field,
                                           const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(context, std::string("field '") + field + "' must be a string or null");
  return it->get<std::string>();
}

}  // namespace

IncompatibleChange change_from_json(const nlohmann::json& doc, const std::string& context) {
  if (!doc.is_object()) fail(context, "change must be an object");
  IncompatibleChange c;
  c.library = require_string(doc, "library", context);
  c.v_old = parse_version(require_string(doc, "v_old", context));
  c.v_new = parse_version(require_string(doc, "v_new", context));

  std::string direction = require_string(doc, "direction", context);
  if (direction == "backward") c.direction = Direction::Backward;
  else if (direction == "forward") c.direction = Direction::Forward;
  else fail(context, "direction must be backward/forward, got '" + direction + "'");

  auto kind_it = doc.find("kind");
  if (kind_it == doc.end() || !kind_it->is_number_integer())
    fail(context, "field 'kind' must be an integer");
  int kind = kind_it->get<int>();
  if (kind < 1 || kind > 18) fail(context, "kind must be 1..18, got " + std::to_string(kind));
  c.kind = static_cast<ChangeKind>(kind);

  auto element_it = doc.find("element");
  if (element_it == doc.end() || !element_it->is_object())
    fail(context, "field 'element' must be an object");
  const nlohmann::json& element = *element_it;
  if (element.contains("symbol")) {
    SymbolKey key;
    key.name = require_string(element, "symbol", context + ".element");
    key.version_tag = optional_string(element, "version_tag", context + ".element");
    c.element = symbol_element(std::move(key));
  } else {
    c.element.type_name = require_string(element, "type", context + ".element");
    std::string tk = require_string(element, "type_kind", context + ".element");
    if (tk == "enum") c.element.type_kind = TypeKind::Enum;
    else if (tk == "struct") c.element.type_kind = TypeKind::Struct;
    else if (tk == "union") c.element.type_kind = TypeKind::Union;
    else if (tk == "class") c.element.type_kind = TypeKind::Class;
    else fail(context + ".element", "type_kind must be enum/struct/union/class, got '" + tk + "'");
    c.element.member_name = optional_string(element, "member", context + ".element");
  }

  auto detail_it = doc.find("detail");
  if (detail_it != doc.end()) {
    if (!detail_it->is_object()) fail(context, "field 'detail' must be an object");
    const nlohmann::json& detail = *detail_it;
    c.detail.old_text = optional_string(detail, "old", context + ".detail");
    c.detail.new_text = optional_string(detail, "new", context + ".detail");
    auto integer = [&](const char* field) -> std::optional<long long> {
      auto it = detail.find(field);
      if (it == detail.end() || it->is_null()) return std::nullopt;
      if (!it->is_number_integer())
        fail(context + ".detail", std::string("field '") + field + "' must be an integer");
      return it->get<long long>();
    };
    if (auto v = integer("param_index")) c.detail.param_index = static_cast<std::size_t>(*v);
    c.detail.old_value = integer("old_value");
    c.detail.new_value = integer("new_value");
    if (auto v = integer("old_position")) c.detail.old_position = static_cast<std::size_t>(*v);
    if (auto v = integer("new_position")) c.detail.new_position = static_cast<std::size_t>(*v);
  }
  return c;
}

}  // namespace depscan
