// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/model/lifecycle.hpp"
#include "teachflow/model/types.hpp"
#include "teachflow/runtime/executor.hpp"
#include "teachflow/synthesis/program.hpp"

namespace teachflow::service {

inline constexpr const char* kTemplateKind = "table→automation→table";

/// A scenario still being recorded: raw events plus the snapshots they
/// reference, re-normalized as a whole on every append.
struct PendingScenario {
  std::string id;
  std::string name;
  std::size_t rowIndex = 0;
  std::vector<model::ActionEvent> events;
  std::map<std::string, std::string> snapshots;  // snapshotRef -> html

  bool operator==(const PendingScenario&) const = default;
};

struct AutomationRecord {
  std::string id;
  std::string name;
  std::string description;
  std::string templateKind = kTemplateKind;
  model::LifecycleState lifecycle;
  std::optional<model::SampleTable> sample;
  std::optional<nlohmann::json> appSpec;
  std::vector<model::Scenario> scenarios;  // merged, in teaching order
  std::vector<PendingScenario> pending;
  synthesis::AutomationProgram program;
  std::vector<synthesis::Conflict> conflicts;  // open; block validation
  std::optional<synthesis::CoverageReport> coverage;
  std::optional<runtime::ValidationReport> lastValidation;
  std::optional<std::string> lastOutputCsv;

  model::AutomationStatus status() const;
  const PendingScenario* find_pending(const std::string& sid) const;
  PendingScenario* find_pending(const std::string& sid);

  bool operator==(const AutomationRecord&) const = default;
};

nlohmann::json summary_json(const AutomationRecord& r);

void to_json(nlohmann::json& j, const PendingScenario& p);
void from_json(const nlohmann::json& j, PendingScenario& p);
void to_json(nlohmann::json& j, const AutomationRecord& r);
void from_json(const nlohmann::json& j, AutomationRecord& r);

}  // namespace teachflow::service
