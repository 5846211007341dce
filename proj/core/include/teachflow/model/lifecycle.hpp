// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace teachflow::model {

enum class Stage { Define, Teach, Validate, ReadyToDeploy };

std::string_view to_string(Stage stage);
/// Accepts the enumeration names, case-insensitively. Throws BadRequest.
Stage parse_stage(std::string_view name);

struct LifecycleState {
  Stage stage = Stage::Define;
  bool operator==(const LifecycleState&) const = default;
};

struct ValidationSummary {
  std::size_t rowsReported = 0;
  std::size_t failedRows = 0;
};

/// What the lifecycle guards need to know about an automation.
struct AutomationStatus {
  bool sampleLoaded = false;
  std::size_t sampleRows = 0;
  bool outputsDefined = false;  // decision values or an extraction column
  std::size_t contributingScenarios = 0;
  std::size_t openConflicts = 0;
  std::optional<ValidationSummary> latestValidation;
};

/// Moves along Define→Teach→Validate→ReadyToDeploy, or Validate→Teach.
/// Throws GuardFailed with the unmet condition.
LifecycleState advance_lifecycle(LifecycleState current, Stage target, const AutomationStatus& status);

/// The reason `target` is unreachable, or nullopt when the move is allowed.
std::optional<std::string> lifecycle_blocker(LifecycleState current, Stage target,
                                             const AutomationStatus& status);

}  // namespace teachflow::model
