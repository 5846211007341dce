// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/service/record.hpp"

namespace teachflow::service {

using nlohmann::json;

model::AutomationStatus AutomationRecord::status() const {
  model::AutomationStatus s;
  s.sampleLoaded = sample.has_value();
  s.sampleRows = sample ? sample->rows.size() : 0;
  s.outputsDefined = sample && (!sample->schema.decisionValues.empty() || sample->schema.targetExtractionColumn);
  s.contributingScenarios = program.contributingScenarios.size();
  s.openConflicts = conflicts.size();
  if (lastValidation) s.latestValidation = model::ValidationSummary{lastValidation->rows.size(), lastValidation->failed_rows()};
  return s;
}

const PendingScenario* AutomationRecord::find_pending(const std::string& sid) const {
  for (const auto& p : pending) {
    if (p.id == sid) return &p;
  }
  return nullptr;
}

PendingScenario* AutomationRecord::find_pending(const std::string& sid) {
  return const_cast<PendingScenario*>(std::as_const(*this).find_pending(sid));
}

json summary_json(const AutomationRecord& r) {
  json j{{"id", r.id},
         {"name", r.name},
         {"description", r.description},
         {"templateKind", r.templateKind},
         {"stage", std::string(model::to_string(r.lifecycle.stage))},
         {"scenarios", r.scenarios.size()},
         {"pendingScenarios", r.pending.size()},
         {"conflicts", r.conflicts.size()}};
  if (r.sample) j["sampleRows"] = r.sample->rows.size();
  if (r.lastValidation) {
    j["lastValidation"] = {{"rows", r.lastValidation->rows.size()}, {"failed", r.lastValidation->failed_rows()}};
  }
  return j;
}

void to_json(json& j, const PendingScenario& p) {
  j = json{{"id", p.id}, {"name", p.name}, {"rowIndex", p.rowIndex}, {"events", p.events}, {"snapshots", p.snapshots}};
}

void from_json(const json& j, PendingScenario& p) {
  p.id = j.at("id").get<std::string>();
  p.name = j.value("name", p.id);
  p.rowIndex = j.value("rowIndex", std::size_t{0});
  p.events = j.value("events", std::vector<model::ActionEvent>{});
  p.snapshots = j.value("snapshots", std::map<std::string, std::string>{});
}

void to_json(json& j, const AutomationRecord& r) {
  j = json{{"formatVersion", 1},
           {"id", r.id},
           {"name", r.name},
           {"description", r.description},
           {"templateKind", r.templateKind},
           {"lifecycle", {{"stage", std::string(model::to_string(r.lifecycle.stage))}}},
           {"scenarios", r.scenarios},
           {"pending", r.pending},
           {"program", r.program},
           {"conflicts", r.conflicts}};
  if (r.sample) j["sample"] = *r.sample;
  if (r.appSpec) j["appSpec"] = *r.appSpec;
  if (r.coverage) j["coverage"] = *r.coverage;
  if (r.lastValidation) j["lastValidation"] = *r.lastValidation;
  if (r.lastOutputCsv) j["lastOutputCsv"] = *r.lastOutputCsv;
}

void from_json(const json& j, AutomationRecord& r) {
  r = AutomationRecord{};
  r.id = j.at("id").get<std::string>();
  r.name = j.at("name").get<std::string>();
  r.description = j.value("description", std::string{});
  r.templateKind = j.value("templateKind", std::string(kTemplateKind));
  r.lifecycle.stage = model::parse_stage(j.at("lifecycle").at("stage").get<std::string>());
  if (j.contains("sample")) r.sample = j.at("sample").get<model::SampleTable>();
  if (j.contains("appSpec")) r.appSpec = j.at("appSpec");
  r.scenarios = j.value("scenarios", std::vector<model::Scenario>{});
  r.pending = j.value("pending", std::vector<PendingScenario>{});
  r.program = j.at("program").get<synthesis::AutomationProgram>();
  r.conflicts = j.value("conflicts", std::vector<synthesis::Conflict>{});
  if (j.contains("coverage")) r.coverage = j.at("coverage").get<synthesis::CoverageReport>();
  if (j.contains("lastValidation")) r.lastValidation = j.at("lastValidation").get<runtime::ValidationReport>();
  if (j.contains("lastOutputCsv")) r.lastOutputCsv = j.at("lastOutputCsv").get<std::string>();
}

}  // namespace teachflow::service
