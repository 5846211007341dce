// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "teachflow/csv.hpp"

namespace teachflow::testing {

using nlohmann::json;

std::filesystem::path fixture_dir() { return TEACHFLOW_FIXTURES_DIR; }

std::filesystem::path fixture(const std::string& relative) { return fixture_dir() / relative; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::filesystem::path& path) { return json::parse(read_text(path)); }

model::SampleTable hr_table() {
  return model::load_sample_table(read_text(fixture("hr/candidates.csv")), kHrDecisions, "Decision");
}

model::SampleTable weather_table() {
  return model::load_sample_table(read_text(fixture("weather/cities.csv")), {}, std::nullopt, "Temperature");
}

RecordedScenario load_recording(const std::string& dir) {
  RecordedScenario r;
  r.events = model::parse_trace(read_text(fixture(dir + "/trace.jsonl")));
  r.snapshots = model::SnapshotStore::load_directory(fixture(dir + "/snapshots"));
  return r;
}

model::Scenario load_scenario(const std::string& dir, const std::string& id, const model::SampleTable& table,
                              std::size_t row) {
  const auto rec = load_recording(dir);
  auto steps = model::normalize_events(rec.events, rec.snapshots, table.schema, table.rows.at(row));
  return model::make_scenario(id, id, std::move(steps), row, table.schema);
}

std::size_t hr_row_of(const std::string& scenarioId) {
  // Rows typed in the gesture scripts: Alice Johnson, Bob Brown, Evan Stone.
  if (scenarioId == "ready-to-go") return 0;
  if (scenarioId == "manual-review1") return 2;
  if (scenarioId == "manual-review2") return 4;
  throw std::invalid_argument("not an HR scenario: " + scenarioId);
}

std::map<std::string, std::string> hr_observed(const std::string& scenarioId) {
  if (scenarioId == "ready-to-go") return {{"search-results", "one record"}, {"resume", "present"}};
  if (scenarioId == "manual-review1") return {{"search-results", "one record"}, {"resume", "absent"}};
  if (scenarioId == "manual-review2") return {{"search-results", "no records"}};
  throw std::invalid_argument("not an HR scenario: " + scenarioId);
}

std::vector<model::Scenario> hr_scenarios(const std::vector<std::string>& ids) {
  const auto table = hr_table();
  std::vector<model::Scenario> out;
  for (const auto& id : ids) out.push_back(load_scenario("hr/" + id, id, table, hr_row_of(id)));
  return out;
}

std::vector<std::string> hr_expected_decisions() {
  const auto app = read_json(fixture("hr/app.json"));
  const auto table = hr_table();
  std::vector<std::string> out;
  for (const auto& row : table.rows) {
    const auto& name = row.at("Candidate");
    const json* first = nullptr;
    for (const auto& rec : app.at("dataset")) {
      if (rec.at("name") == name) {
        first = &rec;
        break;
      }
    }
    if (!first) {
      out.push_back("Manual review");
    } else {
      out.push_back(first->at("resume").get<std::string>().empty() ? "Manual review" : "Ready to go");
    }
  }
  return out;
}

std::vector<std::string> weather_expected_temperatures() {
  const auto app = read_json(fixture("weather/app.json"));
  const auto table = weather_table();
  std::vector<std::string> out;
  for (const auto& row : table.rows) {
    std::string t;
    for (const auto& rec : app.at("dataset")) {
      if (rec.at("city") == row.at("City")) {
        t = rec.at("temperature").get<std::string>();
        break;
      }
    }
    out.push_back(t);
  }
  return out;
}

std::vector<std::string> csv_column(const std::string& csv, const std::string& column) {
  const auto records = csv::parse(csv);
  if (records.empty()) throw std::runtime_error("empty csv");
  std::size_t col = records.front().size();
  for (std::size_t i = 0; i < records.front().size(); ++i) {
    if (records.front()[i] == column) col = i;
  }
  if (col == records.front().size()) throw std::runtime_error("no column " + column);
  std::vector<std::string> out;
  for (std::size_t r = 1; r < records.size(); ++r) out.push_back(records[r].at(col));
  return out;
}

}  // namespace teachflow::testing
