// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#include "usage.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace depscan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw LoadError(context + ": " + message);
}

std::string require_string(const json& obj, const char* field, const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string())
    fail(context, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::size_t require_count(const json& obj, const char* field, const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_number_integer() || it->get<long long>() < 0)
    fail(context, std::string("field '") + field + "' must be a non-negative integer");
  return static_cast<std::size_t>(it->get<long long>());
}

}  // namespace

std::string fact_kind_name(FactKind k) {
  switch (k) {
    case FactKind::UsesReturnValue: return "uses_return_value";
    case FactKind::Calls: return "calls";
    case FactKind::UsesParam: return "uses_param";
    case FactKind::UsesField: return "uses_field";
    case FactKind::UsesEnumMember: return "uses_enum_member";
    case FactKind::ReturnTypeHint: return "return_type_hint";
    case FactKind::ParamTypeHint: return "param_type_hint";
    case FactKind::FieldTypeHint: return "field_type_hint";
    case FactKind::VarTypeHint: return "var_type_hint";
  }
  return "?";
}

bool import_matches(const ImportRef& import, const SymbolKey& def_key, bool def_is_default) {
  if (import.name != def_key.name) return false;
  if (import.version_tag) return def_key.version_tag == import.version_tag;
  return !def_key.version_tag || def_is_default;
}

bool app_imports_symbol(const AppUsage& app, const SymbolDef& def) {
  return std::any_of(app.imports.begin(), app.imports.end(), [&](const ImportRef& import) {
    return import_matches(import, def.key, def.is_default);
  });
}

bool app_imports_name(const AppUsage& app, const std::string& name) {
  return std::any_of(app.imports.begin(), app.imports.end(),
                     [&](const ImportRef& import) { return import.name == name; });
}

bool uses_return_value(const AppUsage& app, const std::string& symbol) {
  return std::any_of(app.facts.begin(), app.facts.end(), [&](const UsageFact& f) {
    return f.kind == FactKind::UsesReturnValue && f.symbol == symbol;
  });
}

std::optional<std::size_t> max_call_arity(const AppUsage& app, const std::string& symbol) {
  std::optional<std::size_t> best;
  for (const UsageFact& f : app.facts) {
    if (f.kind == FactKind::Calls && f.symbol == symbol)
      best = best ? std::max(*best, f.arity) : f.arity;
  }
  return best;
}

bool has_uses_param(const AppUsage& app, const std::string& symbol, std::size_t index) {
  return std::any_of(app.facts.begin(), app.facts.end(), [&](const UsageFact& f) {
    return f.kind == FactKind::UsesParam && f.symbol == symbol && f.index == index;
  });
}

bool has_uses_field(const AppUsage& app, const std::string& type, const std::string& field) {
  return std::any_of(app.facts.begin(), app.facts.end(), [&](const UsageFact& f) {
    return f.kind == FactKind::UsesField && f.type_name == type && f.member == field;
  });
}

bool has_uses_enum_member(const AppUsage& app, const std::string& type,
                          const std::string& member) {
  return std::any_of(app.facts.begin(), app.facts.end(), [&](const UsageFact& f) {
    return f.kind == FactKind::UsesEnumMember && f.type_name == type && f.member == member;
  });
}

std::optional<std::string> return_type_hint(const AppUsage& app, const std::string& symbol) {
  for (const UsageFact& f : app.facts) {
    if (f.kind == FactKind::ReturnTypeHint && f.symbol == symbol) return f.text;
  }
  return std::nullopt;
}

std::optional<std::string> param_type_hint(const AppUsage& app, const std::string& symbol,
                                           std::size_t index) {
  for (const UsageFact& f : app.facts) {
    if (f.kind == FactKind::ParamTypeHint && f.symbol == symbol && f.index == index)
      return f.text;
  }
  return std::nullopt;
}

std::optional<std::string> field_type_hint(const AppUsage& app, const std::string& type,
                                           const std::string& field) {
  for (const UsageFact& f : app.facts) {
    if (f.kind == FactKind::FieldTypeHint && f.type_name == type && f.member == field)
      return f.text;
  }
  return std::nullopt;
}

std::optional<std::string> var_type_hint(const AppUsage& app, const std::string& symbol) {
  for (const UsageFact& f : app.facts) {
    if (f.kind == FactKind::VarTypeHint && f.symbol == symbol) return f.text;
  }
  return std::nullopt;
}

AppUsage usage_from_json(const json& doc, const std::string& context) {
  if (!doc.is_object()) fail(context, "usage-facts document must be a JSON object");

  AppUsage app;
  app.app = require_string(doc, "app", context);
  if (app.app.empty()) fail(context, "app name must be non-empty");
  try {
    app.version = parse_version(require_string(doc, "version", context));
  } catch (const ParseError& e) {
    fail(context, e.what());
  }

  auto imports = doc.find("imports");
  if (imports == doc.end() || !imports->is_array())
    fail(context, "field 'imports' must be an array");
  std::size_t index = 0;
  for (const auto& entry : *imports) {
    std::string ictx = context + ".imports[" + std::to_string(index) + "]";
    if (!entry.is_object()) fail(ictx, "import must be an object");
    ImportRef ref;
    ref.name = require_string(entry, "name", ictx);
    if (ref.name.empty()) fail(ictx, "import name must be non-empty");
    if (auto it = entry.find("version_tag"); it != entry.end() && !it->is_null()) {
      if (!it->is_string() || it->get<std::string>().empty())
        fail(ictx, "version_tag must be a non-empty string or null");
      ref.version_tag = it->get<std::string>();
    }
    app.imports.insert(std::move(ref));
    ++index;
  }

  auto facts = doc.find("facts");
  if (facts == doc.end() || !facts->is_array()) fail(context, "field 'facts' must be an array");
  index = 0;
  for (const auto& entry : *facts) {
    std::string fctx = context + ".facts[" + std::to_string(index) + "]";
    if (!entry.is_object()) fail(fctx, "fact must be an object");
    std::string kind = require_string(entry, "fact", fctx);

    UsageFact fact;
    if (kind == "uses_return_value") {
      fact.kind = FactKind::UsesReturnValue;
      fact.symbol = require_string(entry, "symbol", fctx);
    } else if (kind == "calls") {
      fact.kind = FactKind::Calls;
      fact.symbol = require_string(entry, "symbol", fctx);
      fact.arity = require_count(entry, "arity", fctx);
    } else if (kind == "uses_param") {
      fact.kind = FactKind::UsesParam;
      fact.symbol = require_string(entry, "symbol", fctx);
      fact.index = require_count(entry, "index", fctx);
    } else if (kind == "uses_field") {
      fact.kind = FactKind::UsesField;
      fact.type_name = require_string(entry, "type", fctx);
      fact.member = require_string(entry, "field", fctx);
    } else if (kind == "uses_enum_member") {
      fact.kind = FactKind::UsesEnumMember;
      fact.type_name = require_string(entry, "type", fctx);
      fact.member = require_string(entry, "member", fctx);
    } else if (kind == "return_type_hint") {
      fact.kind = FactKind::ReturnTypeHint;
      fact.symbol = require_string(entry, "symbol", fctx);
      fact.text = normalize_type_text(require_string(entry, "text", fctx));
    } else if (kind == "param_type_hint") {
      fact.kind = FactKind::ParamTypeHint;
      fact.symbol = require_string(entry, "symbol", fctx);
      fact.index = require_count(entry, "index", fctx);
      fact.text = normalize_type_text(require_string(entry, "text", fctx));
    } else if (kind == "field_type_hint") {
      fact.kind = FactKind::FieldTypeHint;
      fact.type_name = require_string(entry, "type", fctx);
      fact.member = require_string(entry, "field", fctx);
      fact.text = normalize_type_text(require_string(entry, "text", fctx));
    } else if (kind == "var_type_hint") {
      fact.kind = FactKind::VarTypeHint;
      fact.symbol = require_string(entry, "symbol", fctx);
      fact.text = normalize_type_text(require_string(entry, "text", fctx));
    } else {
      fail(fctx, "unknown fact kind '" + kind + "'");
    }
    app.facts.insert(std::move(fact));
    ++index;
  }

  // A parameter index must stay below the largest call arity on record.
  for (const UsageFact& f : app.facts) {
    if (f.kind != FactKind::UsesParam && f.kind != FactKind::ParamTypeHint) continue;
    auto arity = max_call_arity(app, f.symbol);
    if (arity && f.index >= *arity)
      fail(context, fact_kind_name(f.kind) + " index " + std::to_string(f.index) +
                        " for '" + f.symbol + "' exceeds the recorded call arity " +
                        std::to_string(*arity));
  }
  return app;
}

AppUsage load_usage_facts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw LoadError("'" + path.string() + "': " + e.what());
  }
  return usage_from_json(doc, path.string());
}

nlohmann::ordered_json usage_to_json(const AppUsage& app) {
  nlohmann::ordered_json doc;
  doc["app"] = app.app;
  doc["version"] = render_version(app.version);

  auto& imports = doc["imports"] = nlohmann::ordered_json::array();
  for (const ImportRef& ref : app.imports) {
    nlohmann::ordered_json entry;
    entry["name"] = ref.name;
    entry["version_tag"] = ref.version_tag ? json(*ref.version_tag) : json(nullptr);
    imports.push_back(std::move(entry));
  }

  auto& facts = doc["facts"] = nlohmann::ordered_json::array();
  for (const UsageFact& f : app.facts) {
    nlohmann::ordered_json entry;
    entry["fact"] = fact_kind_name(f.kind);
    switch (f.kind) {
      case FactKind::UsesReturnValue:
        entry["symbol"] = f.symbol;
        break;
      case FactKind::Calls:
        entry["symbol"] = f.symbol;
        entry["arity"] = f.arity;
        break;
      case FactKind::UsesParam:
        entry["symbol"] = f.symbol;
        entry["index"] = f.index;
        break;
      case FactKind::UsesField:
        entry["type"] = f.type_name;
        entry["field"] = f.member;
        break;
      case FactKind::UsesEnumMember:
        entry["type"] = f.type_name;
        entry["member"] = f.member;
        break;
      case FactKind::ReturnTypeHint:
        entry["symbol"] = f.symbol;
        entry["text"] = f.text;
        break;
      case FactKind::ParamTypeHint:
        entry["symbol"] = f.symbol;
        entry["index"] = f.index;
        entry["text"] = f.text;
        break;
      case FactKind::FieldTypeHint:
        entry["type"] = f.type_name;
        entry["field"] = f.member;
        entry["text"] = f.text;
        break;
      case FactKind::VarTypeHint:
        entry["symbol"] = f.symbol;
        entry["text"] = f.text;
        break;
    }
    facts.push_back(std::move(entry));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Source scanning

namespace {

struct Token {
  enum Kind { Ident, Number, Punct } kind = Punct;
  std::string text;
};

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
      i = std::min(n, i + 2);
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      ++i;
      while (i < n && src[i] != quote) i += (src[i] == '\\') ? 2 : 1;
      if (i < n) ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < n && ident_char(src[i])) ++i;
      out.push_back({Token::Ident, std::string(src.substr(start, i - start))});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < n && (ident_char(src[i]) || src[i] == '.')) ++i;
      out.push_back({Token::Number, std::string(src.substr(start, i - start))});
      continue;
    }
    static constexpr const char* kWide[] = {"->", "::", "==", "!=", "<=", ">=", "&&", "||"};
    bool wide = false;
    for (const char* op : kWide) {
      if (src.substr(i, 2) == op) {
        out.push_back({Token::Punct, op});
        i += 2;
        wide = true;
        break;
      }
    }
    if (wide) continue;
    out.push_back({Token::Punct, std::string(1, c)});
    ++i;
  }
  return out;
}

bool is_punct(const Token& t, const char* text) { return t.kind == Token::Punct && t.text == text; }

bool storage_keyword(const std::string& t) {
  return t == "static" || t == "extern" || t == "register" || t == "auto" || t == "inline" ||
         t == "typedef" || t == "constexpr" || t == "thread_local";
}

// Matching ')' for the '(' at `open`, or npos when unbalanced.
std::size_t matching_paren(const std::vector<Token>& tokens, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    if (is_punct(tokens[i], "(")) ++depth;
    else if (is_punct(tokens[i], ")") && --depth == 0) return i;
  }
  return std::string::npos;
}

// The '(' matching the ')' at `close`, searching backward.
std::size_t matching_open(const std::vector<Token>& tokens, std::size_t close) {
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (is_punct(tokens[i], ")")) ++depth;
    else if (is_punct(tokens[i], "(") && --depth == 0) return i;
  }
  return std::string::npos;
}

bool control_keyword(const std::string& t) {
  return t == "if" || t == "while" || t == "for" || t == "switch";
}

// True when the token before `i` puts a call at statement position
// (its value is not consumed by the surrounding expression).
bool statement_position(const std::vector<Token>& tokens, std::size_t i) {
  if (i == 0) return true;
  const Token& prev = tokens[i - 1];
  if (prev.kind == Token::Punct &&
      (prev.text == ";" || prev.text == "{" || prev.text == "}" || prev.text == ":"))
    return true;
  if (prev.kind == Token::Ident && (prev.text == "else" || prev.text == "do")) return true;
  if (is_punct(prev, ")")) {
    // "(cast)f(...)" consumes the value; "if (...) f(...)" does not.
    std::size_t open = matching_open(tokens, i - 1);
    if (open != std::string::npos && open > 0 && tokens[open - 1].kind == Token::Ident &&
        control_keyword(tokens[open - 1].text))
      return true;
    return open == std::string::npos;
  }
  return false;
}

// Collects a declaration's type text ending just before `var_index`
// (the declared name). Empty when no declaration is present.
std::string declaration_type_before(const std::vector<Token>& tokens, std::size_t var_index) {
  std::vector<std::string> parts;
  for (std::size_t i = var_index; i-- > 0;) {
    const Token& t = tokens[i];
    bool type_token = (t.kind == Token::Ident && t.text != "return" && t.text != "else") ||
                      (t.kind == Token::Punct && (t.text == "*" || t.text == "&"));
    if (!type_token) break;
    if (t.kind == Token::Ident && storage_keyword(t.text)) break;
    parts.push_back(t.text);
  }
  std::string out;
  for (std::size_t i = parts.size(); i-- > 0;) {
    if (!out.empty()) out += ' ';
    out += parts[i];
  }
  return normalize_type_text(out);
}

struct ElementIndex {
  std::set<std::string> symbol_names;
  // member name -> owning record types / enum types carrying it
  std::map<std::string, std::vector<std::string>> record_owners;
  std::map<std::string, std::vector<std::string>> enum_owners;

  explicit ElementIndex(const std::vector<ElementRef>& elements) {
    for (const ElementRef& e : elements) {
      if (e.is_symbol()) {
        symbol_names.insert(e.symbol->name);
      } else if (e.member_name) {
        auto& owners = (e.type_kind == TypeKind::Enum) ? enum_owners : record_owners;
        auto& list = owners[*e.member_name];
        if (std::find(list.begin(), list.end(), e.type_name) == list.end())
          list.push_back(e.type_name);
      }
    }
  }
};

}  // namespace

std::set<UsageFact> scan_source_usage(std::string_view source,
                                      const std::vector<ElementRef>& elements) {
  const ElementIndex index(elements);
  const std::vector<Token> tokens = tokenize(source);
  std::set<UsageFact> facts;

  auto add_symbol_fact = [&](FactKind kind, const std::string& symbol) {
    UsageFact f;
    f.kind = kind;
    f.symbol = symbol;
    facts.insert(std::move(f));
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];

    // Call sites: ident '(' ... ')'. An identifier directly after another
    // identifier is a declaration ("int f(void)"), not a call — except
    // after expression keywords.
    bool declaration_like = i > 0 && tokens[i - 1].kind == Token::Ident &&
                            tokens[i - 1].text != "return" && tokens[i - 1].text != "throw";
    if (t.kind == Token::Ident && !declaration_like && i + 1 < tokens.size() &&
        is_punct(tokens[i + 1], "(") && index.symbol_names.count(t.text)) {
      std::size_t close = matching_paren(tokens, i + 1);
      if (close != std::string::npos) {
        std::size_t arity = 0;
        bool any_token = false;
        int depth = 0;
        for (std::size_t k = i + 1; k < close; ++k) {
          if (is_punct(tokens[k], "(")) ++depth;
          else if (is_punct(tokens[k], ")")) --depth;
          if (k > i + 1) {
            any_token = true;
            if (depth == 1 && is_punct(tokens[k], ",")) ++arity;
          }
        }
        if (any_token) ++arity;
        UsageFact call;
        call.kind = FactKind::Calls;
        call.symbol = t.text;
        call.arity = arity;
        facts.insert(std::move(call));

        bool stmt = statement_position(tokens, i);
        bool discarded = close + 1 >= tokens.size() ||
                         is_punct(tokens[close + 1], ";") || is_punct(tokens[close + 1], ",");
        if (!stmt || !discarded) add_symbol_fact(FactKind::UsesReturnValue, t.text);

        // "type var = call(...)": the declared type hints the return type.
        if (i >= 2 && is_punct(tokens[i - 1], "=") && tokens[i - 2].kind == Token::Ident) {
          std::string type_text = declaration_type_before(tokens, i - 2);
          if (!type_text.empty()) {
            UsageFact hint;
            hint.kind = FactKind::ReturnTypeHint;
            hint.symbol = t.text;
            hint.text = type_text;
            facts.insert(std::move(hint));
          }
        }
      }
    }

    // Member access: '.' or '->' then ident.
    if (t.kind == Token::Punct && (t.text == "." || t.text == "->") && i + 1 < tokens.size() &&
        tokens[i + 1].kind == Token::Ident) {
      const std::string& member = tokens[i + 1].text;
      auto owners = index.record_owners.find(member);
      if (owners != index.record_owners.end()) {
        for (const std::string& owner : owners->second) {
          UsageFact f;
          f.kind = FactKind::UsesField;
          f.type_name = owner;
          f.member = member;
          facts.insert(std::move(f));
        }
      }
    }

    // Bare enum-member mention (not a call, not a member access).
    if (t.kind == Token::Ident) {
      bool after_access =
          i > 0 && tokens[i - 1].kind == Token::Punct &&
          (tokens[i - 1].text == "." || tokens[i - 1].text == "->");
      bool is_call = i + 1 < tokens.size() && is_punct(tokens[i + 1], "(");
      if (!after_access && !is_call) {
        auto owners = index.enum_owners.find(t.text);
        if (owners != index.enum_owners.end()) {
          for (const std::string& owner : owners->second) {
            UsageFact f;
            f.kind = FactKind::UsesEnumMember;
            f.type_name = owner;
            f.member = t.text;
            facts.insert(std::move(f));
          }
        }
      }
    }

    // "type var = expr.member" hints the field's type.
    if (is_punct(t, "=") && i >= 2 && tokens[i - 1].kind == Token::Ident) {
      std::string type_text = declaration_type_before(tokens, i - 1);
      if (!type_text.empty()) {
        for (std::size_t k = i + 1; k < tokens.size() && !is_punct(tokens[k], ";"); ++k) {
          if (tokens[k].kind == Token::Punct && (tokens[k].text == "." || tokens[k].text == "->") &&
              k + 1 < tokens.size() && tokens[k + 1].kind == Token::Ident) {
            auto owners = index.record_owners.find(tokens[k + 1].text);
            if (owners == index.record_owners.end()) continue;
            for (const std::string& owner : owners->second) {
              UsageFact f;
              f.kind = FactKind::FieldTypeHint;
              f.type_name = owner;
              f.member = tokens[k + 1].text;
              f.text = type_text;
              facts.insert(std::move(f));
            }
          }
        }
      }
    }

    // "extern type name;" / "extern type name[...];" hints a variable type.
    if (t.kind == Token::Ident && t.text == "extern") {
      std::size_t k = i + 1;
      while (k < tokens.size() &&
             ((tokens[k].kind == Token::Ident && !storage_keyword(tokens[k].text)) ||
              is_punct(tokens[k], "*") || is_punct(tokens[k], "&"))) {
        ++k;
      }
      // tokens (i+1 .. k-2) are the type, tokens[k-1] the declared name; a
      // variable declaration ends at ';', '=', or an array suffix.
      bool shape_ok = k >= i + 3 && k < tokens.size() && tokens[k - 1].kind == Token::Ident &&
                      (is_punct(tokens[k], ";") || is_punct(tokens[k], "=") ||
                       is_punct(tokens[k], "["));
      if (shape_ok && index.symbol_names.count(tokens[k - 1].text)) {
        std::string full_type;
        for (std::size_t r = i + 1; r + 1 < k; ++r) {
          if (!full_type.empty()) full_type += ' ';
          full_type += tokens[r].text;
        }
        if (is_punct(tokens[k], "[")) {
          full_type += "[";
          for (std::size_t c = k + 1; c < tokens.size() && !is_punct(tokens[c], "]"); ++c)
            full_type += tokens[c].text;
          full_type += "]";
        }
        std::string normalized = normalize_type_text(full_type);
        if (!normalized.empty()) {
          UsageFact f;
          f.kind = FactKind::VarTypeHint;
          f.symbol = tokens[k - 1].text;
          f.text = normalized;
          facts.insert(std::move(f));
        }
      }
    }
  }
  return facts;
}

}  // namespace depscan
