// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/dom/selector.hpp"
#include "teachflow/semantic/detector.hpp"

namespace teachflow::model {

using Row = std::map<std::string, std::string>;

/// Per-row input contract plus the output columns an automation writes.
struct InputSchema {
  std::vector<std::string> columns;
  std::vector<std::string> decisionValues;
  std::optional<std::string> targetDecisionColumn;
  std::optional<std::string> targetExtractionColumn;

  /// Throws DuplicateColumn or InvalidSchema.
  void validate() const;
  bool has_column(std::string_view name) const;
  bool allows_decision(std::string_view value) const;
  /// Input columns followed by the decision and extraction columns.
  std::vector<std::string> output_header() const;

  bool operator==(const InputSchema&) const = default;
};

struct SampleTable {
  InputSchema schema;
  std::vector<Row> rows;

  bool operator==(const SampleTable&) const = default;
};

/// Parses a CSV with a header row into a table. Blank lines are skipped.
/// Throws MalformedCsv, DuplicateColumn, EmptyTable or InvalidSchema.
SampleTable load_sample_table(std::string_view csvBytes, std::vector<std::string> decisionValues,
                              std::optional<std::string> decisionColumn,
                              std::optional<std::string> extractionColumn = std::nullopt);

enum class EventKind { Click, Type, Extract, SelectObject, AssertState, Decide, Ignore };

std::string_view to_string(EventKind kind);
/// Accepts the enumeration names and the raw DOM event names that map to
/// Ignore (focus, blur, scroll, hover, mousemove).
std::optional<EventKind> parse_event_kind(std::string_view name);

struct ActionEvent {
  std::int64_t seq = 0;
  EventKind kind = EventKind::Ignore;
  std::string snapshotRef;
  std::optional<std::string> targetNode;
  std::optional<std::string> typedValue;
  std::optional<std::string> objectRef;
  std::optional<std::string> stateName;
  std::optional<std::string> decision;

  bool operator==(const ActionEvent&) const = default;
};

/// Presence rules for kind-dependent fields. Throws KindFieldMismatch.
void check_event_fields(const ActionEvent& event);

/// One JSON object per line; blank lines ignored. Throws MalformedTrace or
/// KindFieldMismatch.
std::vector<ActionEvent> parse_trace(std::string_view jsonl);
std::string write_trace(const std::vector<ActionEvent>& events);

struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};
struct ColumnRef {
  std::string column;
  bool operator==(const ColumnRef&) const = default;
};
using ParameterBinding = std::variant<Literal, ColumnRef>;

std::string describe(const ParameterBinding& b);

enum class StepKind { Click, Type, Extract, SelectObject, AssertState, Decide };

std::string_view to_string(StepKind kind);
StepKind parse_step_kind(std::string_view name);

/// State conditions are a catalog state ("no records") or its complement
/// written "not <state>".
struct StateGuard {
  std::string state;
  bool negated = false;

  static StateGuard parse(std::string_view text);
  std::string to_string() const;
  bool admits(std::string_view actualState) const;
  bool operator==(const StateGuard&) const = default;
};

struct Step {
  StepKind kind = StepKind::Click;
  std::optional<dom::SelectorSpec> selector;  // Click, Type, Extract, SelectObject, AssertState
  std::string label;
  std::optional<ParameterBinding> binding;         // Type
  std::optional<std::string> demonstratedValue;    // Type: text as typed while teaching
  std::optional<std::string> extractionTarget;     // Extract
  std::optional<std::string> objectRef;            // SelectObject, AssertState
  std::optional<std::string> stateName;            // AssertState (a StateGuard)
  std::optional<semantic::SemanticObject> object;  // SelectObject, AssertState
  std::optional<std::string> decision;             // Decide
  std::string snapshotRef;                         // page current while recording

  bool operator==(const Step&) const = default;
};

struct Scenario {
  std::string id;
  std::string name;
  std::vector<Step> steps;
  std::size_t sampleRowIndex = 0;

  bool operator==(const Scenario&) const = default;
};

/// Builds a scenario and enforces its invariants against the schema.
/// Throws InvalidScenario.
Scenario make_scenario(std::string id, std::string name, std::vector<Step> steps,
                       std::size_t sampleRowIndex, const InputSchema& schema);

const Step* decide_step(const Scenario& s);

void to_json(nlohmann::json& j, const InputSchema& s);
void from_json(const nlohmann::json& j, InputSchema& s);
void to_json(nlohmann::json& j, const SampleTable& t);
void from_json(const nlohmann::json& j, SampleTable& t);
void to_json(nlohmann::json& j, const ActionEvent& e);
void from_json(const nlohmann::json& j, ActionEvent& e);
void to_json(nlohmann::json& j, const ParameterBinding& b);
void from_json(const nlohmann::json& j, ParameterBinding& b);
void to_json(nlohmann::json& j, const Step& s);
void from_json(const nlohmann::json& j, Step& s);
void to_json(nlohmann::json& j, const Scenario& s);
void from_json(const nlohmann::json& j, Scenario& s);

}  // namespace teachflow::model
