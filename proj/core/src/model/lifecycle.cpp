// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/model/lifecycle.hpp"

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::model {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Define: return "Define";
    case Stage::Teach: return "Teach";
    case Stage::Validate: return "Validate";
    case Stage::ReadyToDeploy: return "ReadyToDeploy";
  }
  return "Define";
}

Stage parse_stage(std::string_view name) {
  const auto n = text::to_lower(text::trim(name));
  if (n == "define") return Stage::Define;
  if (n == "teach") return Stage::Teach;
  if (n == "validate") return Stage::Validate;
  if (n == "readytodeploy" || n == "ready-to-deploy" || n == "ready to deploy") return Stage::ReadyToDeploy;
  throw Error(ErrorCode::BadRequest, "unknown lifecycle stage: " + std::string(name));
}

std::optional<std::string> lifecycle_blocker(LifecycleState current, Stage target,
                                             const AutomationStatus& st) {
  const auto from = current.stage;
  if (from == Stage::Define && target == Stage::Teach) {
    if (!st.sampleLoaded || st.sampleRows == 0) return "no sample table loaded";
    if (!st.outputsDefined) return "no decision values or extraction column defined";
    return std::nullopt;
  }
  if (from == Stage::Teach && target == Stage::Validate) {
    if (st.contributingScenarios == 0) return "no scenario has been synthesized into a program";
    if (st.openConflicts > 0) return "the program has unresolved conflicts";
    return std::nullopt;
  }
  if (from == Stage::Validate && target == Stage::ReadyToDeploy) {
    if (!st.latestValidation) return "no validation report";
    if (st.latestValidation->rowsReported != st.sampleRows) {
      return "the latest validation does not cover every sample row";
    }
    if (st.latestValidation->failedRows > 0) {
      return std::to_string(st.latestValidation->failedRows) + " row(s) failed validation";
    }
    return std::nullopt;
  }
  if (from == Stage::Validate && target == Stage::Teach) return std::nullopt;
  return "illegal transition " + std::string(to_string(from)) + " -> " + std::string(to_string(target));
}

LifecycleState advance_lifecycle(LifecycleState current, Stage target, const AutomationStatus& status) {
  if (auto why = lifecycle_blocker(current, target, status)) throw Error(ErrorCode::GuardFailed, *why);
  return LifecycleState{target};
}

}  // namespace teachflow::model
