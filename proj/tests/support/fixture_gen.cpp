// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "support/fixture_gen.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace depscan::testing {
namespace {

const char* kLibrary = "libgen";
const char* kSoname = "libgen.so.1";

const std::vector<std::string>& type_pool() {
  static const std::vector<std::string> pool = {
      "int", "long", "char*", "unsigned int", "double", "gsize*", "bool"};
  return pool;
}

std::size_t pick(std::mt19937& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(std::mt19937& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

std::string pick_type(std::mt19937& rng) {
  return type_pool()[pick(rng, type_pool().size())];
}

std::string pick_type_other_than(std::mt19937& rng, const std::string& avoid) {
  for (;;) {
    std::string t = pick_type(rng);
    if (t != avoid) return t;
  }
}

struct FnShape {
  bool present = false;
  std::optional<std::string> ret;
  std::vector<std::string> params;
};

struct VarShape {
  bool present = false;
  std::string type;
};

struct EnumShape {
  std::vector<std::pair<std::string, long long>> members;
};

struct RecordShape {
  std::vector<std::pair<std::string, std::string>> fields;
};

// An element is a pair of shapes plus the release index where shape A
// gives way to shape B. Stable elements keep flip == 0 with equal shapes.
template <typename Shape>
struct TwoVariant {
  std::string name;
  Shape a;
  Shape b;
  std::size_t flip = 0;  // first release index showing shape B

  const Shape& at(std::size_t version_index) const {
    return version_index < flip ? a : b;
  }
};

FnShape random_fn_shape(std::mt19937& rng) {
  FnShape s;
  s.present = true;
  if (chance(rng, 0.7)) s.ret = pick_type(rng);
  std::size_t params = pick(rng, 4);
  for (std::size_t i = 0; i < params; ++i) s.params.push_back(pick_type(rng));
  return s;
}

TwoVariant<FnShape> make_fn(std::mt19937& rng, std::size_t index,
                            std::size_t releases) {
  TwoVariant<FnShape> e;
  e.name = "f" + std::to_string(index);
  e.a = random_fn_shape(rng);
  e.b = e.a;
  e.flip = 1 + pick(rng, releases - 1);
  switch (pick(rng, 9)) {
    case 0:  // stable
      e.flip = 0;
      break;
    case 1:  // appears
      e.a = FnShape{};
      break;
    case 2:  // disappears
      e.b = FnShape{};
      break;
    case 3:  // gains a return value
      e.a.ret.reset();
      break;
    case 4:  // loses its return value
      e.b.ret.reset();
      break;
    case 5:  // return type changes
      e.a.ret = pick_type(rng);
      e.b.ret = pick_type_other_than(rng, *e.a.ret);
      break;
    case 6:  // gains a trailing parameter
      e.b.params.push_back(pick_type(rng));
      break;
    case 7:  // loses its trailing parameter
      if (e.a.params.empty()) e.a.params.push_back(pick_type(rng));
      e.b = e.a;
      e.b.params.pop_back();
      break;
    case 8:  // one parameter changes type
      if (e.a.params.empty()) {
        e.a.params.push_back(pick_type(rng));
        e.b = e.a;
      }
      {
        std::size_t i = pick(rng, e.a.params.size());
        e.b.params[i] = pick_type_other_than(rng, e.a.params[i]);
      }
      break;
  }
  return e;
}

TwoVariant<VarShape> make_var(std::mt19937& rng, std::size_t index,
                              std::size_t releases) {
  TwoVariant<VarShape> e;
  e.name = "v" + std::to_string(index);
  e.a = {true, pick_type(rng)};
  e.b = e.a;
  e.flip = 1 + pick(rng, releases - 1);
  switch (pick(rng, 4)) {
    case 0:
      e.flip = 0;
      break;
    case 1:
      e.a = VarShape{};
      break;
    case 2:
      e.b = VarShape{};
      break;
    case 3:
      e.b.type = pick_type_other_than(rng, e.a.type);
      break;
  }
  return e;
}

TwoVariant<EnumShape> make_enum(std::mt19937& rng, std::size_t index,
                                std::size_t releases) {
  TwoVariant<EnumShape> e;
  e.name = "E" + std::to_string(index);
  std::size_t members = 1 + pick(rng, 3);
  for (std::size_t i = 0; i < members; ++i)
    e.a.members.emplace_back(e.name + "_M" + std::to_string(i),
                             static_cast<long long>(i));
  e.b = e.a;
  e.flip = 1 + pick(rng, releases - 1);
  switch (pick(rng, 3)) {
    case 0:
      e.flip = 0;
      break;
    case 1:  // gains a member
      e.b.members.emplace_back(e.name + "_M" + std::to_string(members),
                               static_cast<long long>(members));
      break;
    case 2:  // loses one
      e.b.members.erase(e.b.members.begin() +
                        static_cast<std::ptrdiff_t>(pick(rng, e.b.members.size())));
      break;
  }
  return e;
}

TwoVariant<RecordShape> make_record(std::mt19937& rng, std::size_t index,
                                    std::size_t releases) {
  TwoVariant<RecordShape> e;
  e.name = "S" + std::to_string(index);
  std::size_t fields = 1 + pick(rng, 3);
  for (std::size_t i = 0; i < fields; ++i)
    e.a.fields.emplace_back(e.name + "_x" + std::to_string(i), pick_type(rng));
  e.b = e.a;
  e.flip = 1 + pick(rng, releases - 1);
  switch (pick(rng, 4)) {
    case 0:
      e.flip = 0;
      break;
    case 1:  // gains a field
      e.b.fields.emplace_back(e.name + "_x" + std::to_string(fields), pick_type(rng));
      break;
    case 2:  // loses its last field (dropping earlier ones would also shift
             // positions, i.e. a field-order change on top)
      e.b.fields.pop_back();
      break;
    case 3: {  // one field changes type
      std::size_t i = pick(rng, e.b.fields.size());
      e.b.fields[i].second = pick_type_other_than(rng, e.b.fields[i].second);
      break;
    }
  }
  return e;
}

UsageFact symbol_fact(FactKind kind, std::string symbol) {
  UsageFact f;
  f.kind = kind;
  f.symbol = std::move(symbol);
  return f;
}

UsageFact member_fact(FactKind kind, std::string type, std::string member) {
  UsageFact f;
  f.kind = kind;
  f.type_name = std::move(type);
  f.member = std::move(member);
  return f;
}

}  // namespace

GeneratedInstance generate_instance(std::mt19937& rng) {
  std::size_t releases = 2 + pick(rng, 7);

  std::vector<TwoVariant<FnShape>> fns;
  std::vector<TwoVariant<VarShape>> vars;
  std::vector<TwoVariant<EnumShape>> enums;
  std::vector<TwoVariant<RecordShape>> records;
  std::size_t n_fn = 1 + pick(rng, 3);
  std::size_t n_var = pick(rng, 3);
  std::size_t n_enum = pick(rng, 2);
  std::size_t n_record = pick(rng, 2);
  for (std::size_t i = 0; i < n_fn; ++i) fns.push_back(make_fn(rng, i, releases));
  for (std::size_t i = 0; i < n_var; ++i) vars.push_back(make_var(rng, i, releases));
  for (std::size_t i = 0; i < n_enum; ++i) enums.push_back(make_enum(rng, i, releases));
  for (std::size_t i = 0; i < n_record; ++i)
    records.push_back(make_record(rng, i, releases));

  // Materialize the history. Every named type gets a stable carrier
  // function whose signature references it; member changes are only
  // reachable through symbols, mirroring how real ABIs are consumed.
  std::vector<AbiSnapshot> snapshots;
  for (std::size_t v = 0; v < releases; ++v) {
    AbiSnapshot s;
    s.library = kLibrary;
    s.version = parse_version(std::to_string(v + 1) + ".0");
    s.soname = kSoname;
    for (const auto& e : fns) {
      const FnShape& shape = e.at(v);
      if (!shape.present) continue;
      SymbolDef def;
      def.key = {e.name, std::nullopt};
      def.kind = SymbolKind::Function;
      def.return_type = shape.ret;
      def.params = shape.params;
      s.symbols[def.key] = def;
    }
    for (const auto& e : vars) {
      const VarShape& shape = e.at(v);
      if (!shape.present) continue;
      SymbolDef def;
      def.key = {e.name, std::nullopt};
      def.kind = SymbolKind::Variable;
      def.var_type = shape.type;
      s.symbols[def.key] = def;
    }
    auto add_carrier = [&s](const std::string& type_name) {
      SymbolDef def;
      def.key = {"use_" + type_name, std::nullopt};
      def.kind = SymbolKind::Function;
      def.params = {type_name + "*"};
      s.symbols[def.key] = def;
    };
    for (const auto& e : enums) {
      TypeDef def;
      def.name = e.name;
      def.kind = TypeKind::Enum;
      for (const auto& [name, value] : e.at(v).members)
        def.members.push_back({name, value, std::nullopt});
      s.types[def.name] = def;
      add_carrier(e.name);
    }
    for (const auto& e : records) {
      TypeDef def;
      def.name = e.name;
      def.kind = TypeKind::Struct;
      for (const auto& [name, type] : e.at(v).fields)
        def.members.push_back({name, std::nullopt, type});
      s.types[def.name] = def;
      add_carrier(e.name);
    }
    snapshots.push_back(std::move(s));
  }
  LibraryHistory history = history_from_snapshots(kLibrary, std::move(snapshots));

  std::size_t ref = pick(rng, releases);

  // Usage facts: exactly what a compiler would have recorded building the
  // app against release `ref`. Unused elements and elements absent at the
  // reference release leave no trace.
  AppUsage app;
  app.app = "genapp";
  app.version = parse_version("1.0");
  for (const auto& e : fns) {
    const FnShape& shape = e.at(ref);
    if (!shape.present || !chance(rng, 0.8)) continue;
    app.imports.insert({e.name, std::nullopt});
    UsageFact call = symbol_fact(FactKind::Calls, e.name);
    call.arity = shape.params.size();
    app.facts.insert(call);
    for (std::size_t i = 0; i < shape.params.size(); ++i) {
      UsageFact hint = symbol_fact(FactKind::ParamTypeHint, e.name);
      hint.index = i;
      hint.text = shape.params[i];
      app.facts.insert(hint);
      if (chance(rng, 0.5)) {
        UsageFact use = symbol_fact(FactKind::UsesParam, e.name);
        use.index = i;
        app.facts.insert(use);
      }
    }
    if (shape.ret) {
      app.facts.insert(symbol_fact(FactKind::UsesReturnValue, e.name));
      UsageFact hint = symbol_fact(FactKind::ReturnTypeHint, e.name);
      hint.text = *shape.ret;
      app.facts.insert(hint);
    }
  }
  for (const auto& e : vars) {
    const VarShape& shape = e.at(ref);
    if (!shape.present || !chance(rng, 0.8)) continue;
    app.imports.insert({e.name, std::nullopt});
    UsageFact hint = symbol_fact(FactKind::VarTypeHint, e.name);
    hint.text = shape.type;
    app.facts.insert(hint);
  }
  for (const auto& e : enums) {
    if (!chance(rng, 0.8)) continue;
    app.imports.insert({"use_" + e.name, std::nullopt});
    for (const auto& [name, value] : e.at(ref).members)
      app.facts.insert(member_fact(FactKind::UsesEnumMember, e.name, name));
  }
  for (const auto& e : records) {
    if (!chance(rng, 0.8)) continue;
    app.imports.insert({"use_" + e.name, std::nullopt});
    for (const auto& [name, type] : e.at(ref).fields) {
      app.facts.insert(member_fact(FactKind::UsesField, e.name, name));
      UsageFact hint = member_fact(FactKind::FieldTypeHint, e.name, name);
      hint.text = type;
      app.facts.insert(hint);
    }
  }

  // The accepted range always contains the reference release; Debian
  // ranges are conjunctions, hence convex, so any observable flip keeps at
  // least one of its two ends inside the range.
  std::vector<Version> universe = release_versions(history);
  std::string range_text;
  switch (pick(rng, 7)) {
    case 0:
      break;  // accepts everything
    case 1:
      range_text = ">= " + render_version(universe[pick(rng, ref + 1)]);
      break;
    case 2:
      range_text = "<= " + render_version(universe[ref + pick(rng, releases - ref)]);
      break;
    case 3: {
      std::size_t lo = pick(rng, ref + 1);
      std::size_t hi = ref + pick(rng, releases - ref);
      range_text = ">= " + render_version(universe[lo]) + ", <= " +
                   render_version(universe[hi]);
      break;
    }
    case 4:
      if (ref > 0) {
        range_text = ">> " + render_version(universe[pick(rng, ref)]);
        break;
      }
      range_text = ">= " + render_version(universe[0]);
      break;
    case 5:
      if (ref + 1 < releases) {
        range_text = "<< " + render_version(universe[ref + 1 + pick(rng, releases - ref - 1)]);
        break;
      }
      range_text = "<= " + render_version(universe[releases - 1]);
      break;
    case 6:
      range_text = "= " + render_version(universe[ref]);
      break;
  }

  GeneratedInstance inst;
  inst.history = std::move(history);
  inst.app = std::move(app);
  inst.required = {kLibrary, parse_range(range_text)};
  inst.ref_index = ref;
  return inst;
}

}  // namespace depscan::testing
