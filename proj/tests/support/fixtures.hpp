// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/model/normalize.hpp"
#include "teachflow/model/types.hpp"
#include "teachflow/runtime/simapp.hpp"

namespace teachflow::testing {

std::filesystem::path fixture_dir();
std::filesystem::path fixture(const std::string& relative);
std::string read_text(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

inline const std::vector<std::string> kHrDecisions = {"Ready to go", "Manual review"};
inline const std::vector<std::string> kHrScenarios = {"ready-to-go", "manual-review1", "manual-review2"};

model::SampleTable hr_table();
model::SampleTable weather_table();

struct RecordedScenario {
  std::vector<model::ActionEvent> events;
  model::SnapshotStore snapshots;
};

/// Trace and snapshots under fixtures/<dir>.
RecordedScenario load_recording(const std::string& dir);

/// Normalizes a recorded trace against `row` of the table.
model::Scenario load_scenario(const std::string& dir, const std::string& id, const model::SampleTable& table,
                              std::size_t row);

/// The three HR demonstrations, in the order given by `ids`.
std::vector<model::Scenario> hr_scenarios(const std::vector<std::string>& ids = kHrScenarios);

/// Sample row each HR demonstration was recorded with.
std::size_t hr_row_of(const std::string& scenarioId);

/// Object states on screen while each HR demonstration was recorded.
std::map<std::string, std::string> hr_observed(const std::string& scenarioId);

/// The HR screening rule applied directly to the app dataset: no matching
/// record gives manual review, otherwise the first match's resume decides.
std::vector<std::string> hr_expected_decisions();

/// Temperatures looked up in the weather dataset by city.
std::vector<std::string> weather_expected_temperatures();

/// Cells of one column of a CSV document, header excluded.
std::vector<std::string> csv_column(const std::string& csv, const std::string& column);

}  // namespace teachflow::testing
