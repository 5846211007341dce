// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "teachflow/dom/snapshot.hpp"

namespace teachflow::semantic {

inline constexpr std::string_view kUnknownState = "unknown";

struct IntTerm {
  enum class Kind { Literal, RowCount };
  Kind kind = Kind::Literal;
  long long value = 0;
  std::string selector;

  bool operator==(const IntTerm&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BoolExpr {
  enum class Kind { True, False, And, Or, Not, Exists, TextContains, AttrEquals, Compare };
  Kind kind = Kind::True;
  std::vector<BoolExpr> operands;  // And, Or, Not
  std::string selector;            // Exists, TextContains, AttrEquals
  std::string arg1;                // TextContains text / AttrEquals name
  std::string arg2;                // AttrEquals value
  IntTerm lhs;
  IntTerm rhs;
  CmpOp op = CmpOp::Eq;

  bool operator==(const BoolExpr&) const = default;
};

struct StateCase {
  std::string state;
  BoolExpr condition;
  bool operator==(const StateCase&) const = default;
};

/// A closed, side-effect free state classifier:
///
///   case "no records" when rowCount("tbody tr") == 0;
///   case "one record" when rowCount("tbody tr") == 1;
///
/// Selectors are relative to the object's anchor element. Cases are tried
/// in order; the first true one names the state, otherwise "unknown".
class StatePredicate {
 public:
  StatePredicate() = default;
  explicit StatePredicate(std::vector<StateCase> cases) : cases_(std::move(cases)) {}

  /// Throws Error(InvalidPredicate) on any grammar violation, unknown
  /// primitive or malformed selector.
  static StatePredicate parse(std::string_view source);

  /// Canonical text form; parse(to_string()) == *this.
  std::string to_string() const;

  /// Total: a missing anchor is an empty context (counts 0, tests false).
  std::string evaluate(const dom::DomSnapshot& snapshot, std::optional<dom::NodeIndex> anchor) const;

  const std::vector<StateCase>& cases() const { return cases_; }
  std::set<std::string> states() const;

  bool operator==(const StatePredicate&) const = default;

 private:
  std::vector<StateCase> cases_;
};

}  // namespace teachflow::semantic
