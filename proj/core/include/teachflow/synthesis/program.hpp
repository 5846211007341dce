// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/model/types.hpp"
#include "teachflow/semantic/detector.hpp"

namespace teachflow::synthesis {

enum class NodeKind { Linear, Branch, Leaf, ExtractLeaf };

std::string_view to_string(NodeKind kind);

/// Taken when no explicit arm names the observed state and the state is
/// not excluded.
struct ElseArm {
  std::vector<std::string> excluded;  // sorted, unique
  std::string next;

  bool admits(std::string_view state) const;
  bool operator==(const ElseArm&) const = default;
};

struct StepNode {
  std::string id;
  NodeKind kind = NodeKind::Linear;

  // Linear
  std::optional<model::Step> step;
  std::string next;

  // Branch
  std::string objectRef;
  std::string label;
  std::optional<semantic::SemanticObject> object;
  std::map<std::string, std::string> arms;  // state name -> node id
  std::optional<ElseArm> elseArm;

  // Leaf
  std::optional<std::string> decision;

  bool operator==(const StepNode&) const = default;
};

/// A tree of steps rooted at `entry`; node ids are "n<index>".
struct AutomationProgram {
  std::vector<StepNode> nodes;
  std::string entry;
  std::vector<std::string> contributingScenarios;

  bool empty() const { return nodes.empty(); }
  /// Throws UnknownNode.
  const StepNode& node(std::string_view id) const;
  StepNode& node(std::string_view id);
  /// Ids in depth-first order from the entry; arms by state name, else last.
  std::vector<std::string> preorder() const;

  bool operator==(const AutomationProgram&) const = default;
};

struct Conflict {
  enum class Kind { DivergenceWithoutCondition, StepMismatch, DuplicateArm, DecisionContradiction };

  Kind kind = Kind::StepMismatch;
  std::string scenarioId;
  std::string message;
  std::optional<std::size_t> position;  // StepMismatch
  std::string expected;                 // StepMismatch
  std::string found;                    // StepMismatch
  std::string objectRef;                // DuplicateArm
  std::string stateName;                // DuplicateArm

  bool operator==(const Conflict&) const = default;
};

std::string_view to_string(Conflict::Kind kind);

struct MergeOutcome {
  AutomationProgram program;  // unchanged input when `conflict` is set
  std::optional<Conflict> conflict;
};

/// Walks the program from the entry alongside the scenario, extending it at
/// the first divergence. Atomic: on conflict the input program is returned.
MergeOutcome merge_scenario(const AutomationProgram& program, const model::Scenario& scenario);

struct SynthesisResult {
  AutomationProgram program;
  std::vector<Conflict> conflicts;
};

/// Folds merge_scenario over the scenarios, skipping conflicting ones.
SynthesisResult synthesize_all(std::span<const model::Scenario> scenarios);

struct UncoveredState {
  std::string objectRef;
  std::string stateName;
  bool operator==(const UncoveredState&) const = default;
  auto operator<=>(const UncoveredState&) const = default;
};

struct Suggestion {
  std::optional<std::string> decision;
  std::optional<UncoveredState> state;
  std::vector<std::string> pathPrefix;  // labels leading to the branch
  std::string text;
  bool operator==(const Suggestion&) const = default;
};

struct CoverageReport {
  std::vector<std::string> uncoveredDecisions;  // schema order
  std::vector<UncoveredState> uncoveredStates;  // program path order
  std::vector<Suggestion> suggestions;

  bool complete() const { return uncoveredDecisions.empty() && uncoveredStates.empty(); }
  bool operator==(const CoverageReport&) const = default;
};

/// Decision values with no leaf and object states no arm accepts.
/// Throws InconsistentProgram when conflicts are open or the program is not
/// a well-formed tree.
CoverageReport coverage(const AutomationProgram& program, const model::InputSchema& schema,
                        std::span<const Conflict> openConflicts = {});

/// Structural checks: tree shape, node payloads, and leaf decisions in the
/// schema when one is given. Throws MalformedProgram.
void check_program(const AutomationProgram& program, const model::InputSchema* schema = nullptr);

enum class MapFormat { Json, Dot };

std::string export_map(const AutomationProgram& program, MapFormat format);
/// Inverse of the JSON export. Throws MalformedProgram.
AutomationProgram import_map(std::string_view json);

void to_json(nlohmann::json& j, const AutomationProgram& p);
void from_json(const nlohmann::json& j, AutomationProgram& p);
void to_json(nlohmann::json& j, const Conflict& c);
void from_json(const nlohmann::json& j, Conflict& c);
void to_json(nlohmann::json& j, const CoverageReport& c);
void from_json(const nlohmann::json& j, CoverageReport& c);

}  // namespace teachflow::synthesis
