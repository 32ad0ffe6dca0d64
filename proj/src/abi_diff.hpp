// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_ABI_DIFF_HPP
#define DEPSCAN_ABI_DIFF_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abi_model.hpp"
#include "version.hpp"

namespace depscan {

// The closed change taxonomy. Ids are load-bearing: rule decisions and the
// JSON output key off them. Struct rules (4-7) also cover union and class.
enum class ChangeKind : int {
  EnumAddsMember = 1,
  EnumRemovesMember = 2,
  EnumChangesMemberValue = 3,
  StructAddsField = 4,
  StructRemovesField = 5,
  StructChangesFieldType = 6,
  StructChangesFieldOrder = 7,
  VariableAdds = 8,
  VariableRemoves = 9,
  VariableChangesType = 10,
  FunctionAdds = 11,
  FunctionRemoves = 12,
  FunctionAddsParameter = 13,
  FunctionRemovesParameter = 14,
  FunctionChangesParameterType = 15,
  FunctionAddsReturnValue = 16,
  FunctionRemovesReturnValue = 17,
  FunctionChangesReturnType = 18,
};

int change_kind_id(ChangeKind k);
std::string change_kind_name(ChangeKind k);

// backward: breaks binaries built against v_old when run with v_new.
// forward: derived by reversal — breaks binaries built against v_new
// when run with v_old.
enum class Direction { Backward, Forward };

std::string direction_text(Direction d);

// The changed element: a symbol, or a member of a named type. Exactly one
// arm; the symbol arm is active iff `symbol` is set.
struct ElementRef {
  std::optional<SymbolKey> symbol;
  std::string type_name;                   // type arm
  std::optional<TypeKind> type_kind;       // type arm
  std::optional<std::string> member_name;  // type arm

  bool is_symbol() const { return symbol.has_value(); }

  friend auto operator<=>(const ElementRef&, const ElementRef&) = default;
};

ElementRef symbol_element(SymbolKey key);
ElementRef type_element(std::string type_name, TypeKind kind, std::string member_name);

std::string element_text(const ElementRef& e);

// Change payload. old_* fields describe the v_old side, new_* the v_new
// side; the forward relabeling swaps every such pair.
struct ChangeDetail {
  std::optional<std::string> old_text;
  std::optional<std::string> new_text;
  std::optional<std::size_t> param_index;    // kinds 13-15
  std::optional<long long> old_value;        // kind 3 (and 2's removed value)
  std::optional<long long> new_value;        // kind 3 (and 1's added value)
  std::optional<std::size_t> old_position;   // kind 7
  std::optional<std::size_t> new_position;   // kind 7

  friend auto operator<=>(const ChangeDetail&, const ChangeDetail&) = default;
};

struct IncompatibleChange {
  std::string library;
  Version v_old;
  Version v_new;
  ChangeKind kind = ChangeKind::FunctionRemoves;
  Direction direction = Direction::Backward;
  ElementRef element;
  ChangeDetail detail;
};

bool operator==(const IncompatibleChange& a, const IncompatibleChange& b);

// Canonical ordering: (v_old, v_new, direction, kind, element, detail).
// Diff results and the history union are always sorted by it.
bool change_less(const IncompatibleChange& a, const IncompatibleChange& b);

// Whitespace-insensitive canonical form of a type-ref text: runs collapse
// to one space and spaces touching punctuation are dropped, so
// "long *" == "long*" and "std::pair< int , char >" == "std::pair<int,char>".
// Semantic aliasing (gchar vs char) is intentionally NOT resolved.
std::string normalize_type_text(std::string_view text);

// Changes breaking binaries built against `a` when run with `b`. Pure
// additions never appear here; they surface through diff_forward.
// Throws std::invalid_argument when the snapshots name different libraries.
std::vector<IncompatibleChange> diff_backward(const AbiSnapshot& a, const AbiSnapshot& b);

// diff_backward(b, a) relabeled: direction=forward, (v_old, v_new) =
// (a.version, b.version), removal kinds become their "adds" counterparts,
// and every old/new payload pair is swapped.
std::vector<IncompatibleChange> diff_forward(const AbiSnapshot& a, const AbiSnapshot& b);

// Union of both directions over every adjacent release pair. Pairs whose
// sonames differ are skipped entirely (the soname bump already signals the
// break to the dependency system).
std::vector<IncompatibleChange> collect_incompatible_changes(const LibraryHistory& h);

// One-line human phrasing, e.g. "struct sqlite3_module adds xSavepoint",
// "Remove gzgetc()", "g_utf8_make_valid() adds parameter gssize".
std::string describe_change(const IncompatibleChange& c);

nlohmann::ordered_json change_to_json(const IncompatibleChange& c);

// Inverse of change_to_json. Derived fields (kind_name, description) are
// ignored on input and regenerated on output.
IncompatibleChange change_from_json(const nlohmann::json& doc, const std::string& context);

}  // namespace depscan

#endif
