// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "teachflow/error.hpp"
#include "teachflow/runtime/executor.hpp"
#include "teachflow/runtime/simapp.hpp"
#include "teachflow/runtime/template.hpp"
#include "teachflow/synthesis/program.hpp"

namespace teachflow {
namespace {

using nlohmann::json;
using runtime::render_template;
using testing::fixture;
using testing::read_json;

std::shared_ptr<const runtime::SimAppSpec> load_app(const std::string& dir) {
  return std::make_shared<runtime::SimAppSpec>(runtime::SimAppSpec::from_json(read_json(fixture(dir + "/app.json"))));
}

synthesis::AutomationProgram hr_program() {
  auto out = synthesis::synthesize_all(testing::hr_scenarios());
  EXPECT_TRUE(out.conflicts.empty());
  return out.program;
}

runtime::Clock fixed_clock() {
  return [] { return std::chrono::system_clock::time_point(std::chrono::seconds(1'800'000'000)); };
}

// Walks a trajectory alongside the scenario it should reproduce.
::testing::AssertionResult follows_scenario(const synthesis::AutomationProgram& p, const runtime::RowResult& r,
                                            const model::Scenario& s) {
  std::size_t k = 0;
  for (const auto& t : r.trajectory) {
    const auto& n = p.node(t.nodeId);
    if (n.kind == synthesis::NodeKind::Linear) {
      if (k >= s.steps.size() || s.steps[k].kind != n.step->kind || s.steps[k].label != n.step->label) {
        return ::testing::AssertionFailure() << "step " << k << " differs at " << t.nodeId;
      }
      ++k;
    } else if (n.kind == synthesis::NodeKind::Branch) {
      if (k < s.steps.size() && s.steps[k].kind == model::StepKind::AssertState && s.steps[k].objectRef == n.objectRef) {
        if (!model::StateGuard::parse(*s.steps[k].stateName).admits(*t.stateTaken)) {
          return ::testing::AssertionFailure() << "state " << *t.stateTaken << " violates " << *s.steps[k].stateName;
        }
        ++k;
      }
    } else if (n.kind == synthesis::NodeKind::Leaf) {
      if (k + 1 != s.steps.size() || s.steps[k].decision != n.decision) {
        return ::testing::AssertionFailure() << "ended at " << *n.decision << " with " << s.steps.size() - k << " steps left";
      }
      return ::testing::AssertionSuccess();
    }
  }
  return k == s.steps.size() ? ::testing::AssertionSuccess() : ::testing::AssertionFailure() << "steps left over";
}

::testing::AssertionResult is_root_to_leaf(const synthesis::AutomationProgram& p, const runtime::RowResult& r) {
  if (r.trajectory.empty() || r.trajectory.front().nodeId != p.entry) return ::testing::AssertionFailure() << "not rooted";
  for (std::size_t i = 0; i + 1 < r.trajectory.size(); ++i) {
    const auto& n = p.node(r.trajectory[i].nodeId);
    const auto& next = r.trajectory[i + 1].nodeId;
    bool edge = n.next == next;
    for (const auto& [state, id] : n.arms) edge = edge || id == next;
    if (n.elseArm) edge = edge || n.elseArm->next == next;
    if (!edge) return ::testing::AssertionFailure() << "no edge " << n.id << " -> " << next;
  }
  const auto last = p.node(r.trajectory.back().nodeId).kind;
  if (r.success() && last != synthesis::NodeKind::Leaf && last != synthesis::NodeKind::ExtractLeaf) {
    return ::testing::AssertionFailure() << "successful row did not end at a leaf";
  }
  return ::testing::AssertionSuccess();
}

TEST(Template, VariablesSectionsAndEscaping) {
  json ctx{{"name", "<b>&"},
           {"rows", {{{"v", "a"}}, {{"v", "b"}}}},
           {"empty", json::array()},
           {"obj", {{"x", 1}}},
           {"flag", false}};
  EXPECT_EQ(render_template("{{name}}", ctx), "&lt;b&gt;&amp;");
  EXPECT_EQ(render_template("{{#rows}}[{{@index}}:{{v}}]{{/rows}}", ctx), "[0:a][1:b]");
  EXPECT_EQ(render_template("{{^empty}}none{{/empty}}{{^rows}}x{{/rows}}", ctx), "none");
  EXPECT_EQ(render_template("{{obj.x}}{{#obj}}-{{x}}{{/obj}}", ctx), "1-1");
  EXPECT_EQ(render_template("{{#flag}}yes{{/flag}}{{^flag}}no{{/flag}}{{missing}}", ctx), "no");
}

TEST(Template, UnbalancedSectionsAreInvalid) {
  for (const char* bad : {"{{#a}}x", "x{{/a}}", "{{#a}}{{/b}}"}) {
    try {
      render_template(bad, json::object());
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidAppSpec);
    }
  }
}

TEST(SimApp, SpecRoundTripsAndValidates) {
  auto spec = runtime::SimAppSpec::from_json(read_json(fixture("hr/app.json")));
  auto again = runtime::SimAppSpec::from_json(spec.to_json());
  EXPECT_EQ(again.to_json(), spec.to_json());
  auto broken = spec.to_json();
  broken["transitions"][0]["to"] = "nowhere";
  EXPECT_THROW(runtime::SimAppSpec::from_json(broken), Error);
  broken = spec.to_json();
  broken["transitions"][0]["on"] = "hover";
  EXPECT_THROW(runtime::SimAppSpec::from_json(broken), Error);
}

TEST(SimApp, SearchFlowFollowsTransitions) {
  runtime::SimApp app(load_app("hr"));
  auto find = [&](const std::string& css) { return app.resolve(dom::SelectorSpec{{}, {dom::ById{css}}, 0}); };
  EXPECT_EQ(app.page(), "dashboard");
  app.click(find("nav-recruitment"));
  EXPECT_EQ(app.page(), "recruitment");
  app.type(find("search"), "Carlos Diaz");
  EXPECT_EQ(app.inputs().at("candidate"), "Carlos Diaz");
  app.click(find("search-btn"));
  EXPECT_EQ(app.page(), "results");
  EXPECT_THROW(app.click(find("results-table")), Error);
  app.reset();
  EXPECT_EQ(app.page(), "dashboard");
  EXPECT_TRUE(app.inputs().empty());
}

TEST(Execute, CandidateWithResumeIsReadyToGo) {
  auto p = hr_program();
  auto table = testing::hr_table();
  runtime::SimApp app(load_app("hr"));
  auto r = runtime::execute_row(p, table.schema, table.rows[1], 1, app);
  ASSERT_TRUE(r.success()) << r.failure->message;
  EXPECT_EQ(r.decisionWritten, "Ready to go");
  EXPECT_TRUE(is_root_to_leaf(p, r));
}

TEST(Execute, MissingCandidateTakesNoRecordsArm) {
  auto p = hr_program();
  auto table = testing::hr_table();
  runtime::SimApp app(load_app("hr"));
  auto r = runtime::execute_row(p, table.schema, table.rows[5], 5, app);
  ASSERT_TRUE(r.success());
  EXPECT_EQ(r.decisionWritten, "Manual review");
  auto taken = std::find_if(r.trajectory.begin(), r.trajectory.end(), [](const auto& t) { return t.stateTaken; });
  ASSERT_NE(taken, r.trajectory.end());
  EXPECT_EQ(*taken->stateTaken, "no records");
}

TEST(Execute, BrokenPageFailsOnlyThatRow) {
  auto spec = read_json(fixture("hr/app.json"));
  spec["pages"]["maintenance"] = "<html><body><p>Search is down</p></body></html>";
  spec["transitions"].push_back({{"from", "recruitment"},
                                 {"on", "type"},
                                 {"target", "#search"},
                                 {"when", {{"input", {{"key", "candidate"}, {"equals", "Bob Brown"}}}}},
                                 {"to", "maintenance"}});
  auto app = std::make_shared<runtime::SimAppSpec>(runtime::SimAppSpec::from_json(spec));
  auto table = testing::hr_table();
  auto out = runtime::validate(hr_program(), table, app);
  ASSERT_EQ(out.report.rows.size(), 6u);
  EXPECT_EQ(out.report.failed_rows(), 1u);
  const auto& bad = out.report.rows[2];
  ASSERT_FALSE(bad.success());
  EXPECT_EQ(bad.failure->code, ErrorCode::ElementNotFound);
  EXPECT_EQ(bad.failure->stepPosition, bad.trajectory.size());
  auto want = testing::hr_expected_decisions();
  for (std::size_t i = 3; i < 6; ++i) EXPECT_EQ(out.report.rows[i].decisionWritten, want[i]);
}

TEST(Validate, HrDecisionsMatchDataset) {
  auto table = testing::hr_table();
  auto out = runtime::validate(hr_program(), table, load_app("hr"));
  EXPECT_EQ(out.report.failed_rows(), 0u);
  EXPECT_EQ(testing::csv_column(out.outputCsv, "Decision"), testing::hr_expected_decisions());
  EXPECT_EQ(testing::hr_expected_decisions(),
            (std::vector<std::string>{"Ready to go", "Ready to go", "Manual review", "Manual review", "Manual review",
                                      "Manual review"}));
}

TEST(Validate, WeatherTemperaturesExtracted) {
  auto table = testing::weather_table();
  auto scenario = testing::load_scenario("weather/city-lookup", "city-lookup", table, 0);
  auto p = synthesis::merge_scenario({}, scenario).program;
  auto out = runtime::validate(p, table, load_app("weather"));
  EXPECT_EQ(out.report.failed_rows(), 0u);
  EXPECT_EQ(testing::csv_column(out.outputCsv, *table.schema.targetExtractionColumn),
            testing::weather_expected_temperatures());
}

TEST(Validate, EmptyTableGivesHeaderOnly) {
  auto table = testing::hr_table();
  table.rows.clear();
  auto out = runtime::validate(hr_program(), table, load_app("hr"));
  EXPECT_TRUE(out.report.rows.empty());
  EXPECT_EQ(out.outputCsv, "Candidate,Notes,Decision\r\n");
}

TEST(Validate, EmptyProgramIsInconsistent) {
  try {
    runtime::validate({}, testing::hr_table(), load_app("hr"));
    FAIL() << "expected InconsistentProgram";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentProgram);
  }
}

TEST(Validate, DeterministicWithFixedClock) {
  auto table = testing::hr_table();
  runtime::ValidationOptions opts;
  opts.clock = fixed_clock();
  auto a = runtime::validate(hr_program(), table, load_app("hr"), opts);
  auto b = runtime::validate(hr_program(), table, load_app("hr"), opts);
  EXPECT_EQ(json(a.report).dump(), json(b.report).dump());
  EXPECT_EQ(a.outputCsv, b.outputCsv);
  EXPECT_EQ(json(a.report).get<runtime::ValidationReport>(), a.report);
}

TEST(Validate, PermutedRowsPermuteResults) {
  auto table = testing::hr_table();
  auto base = runtime::validate(hr_program(), table, load_app("hr"));
  std::vector<std::size_t> perm{5, 2, 0, 4, 1, 3};
  auto shuffled = table;
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled.rows[i] = table.rows[perm[i]];
  auto other = runtime::validate(hr_program(), shuffled, load_app("hr"));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    EXPECT_EQ(other.report.rows[i].decisionWritten, base.report.rows[perm[i]].decisionWritten);
    EXPECT_EQ(other.report.rows[i].trajectory, base.report.rows[perm[i]].trajectory);
  }
}

TEST(Validate, TrajectoriesAreRootToLeafPaths) {
  auto p = hr_program();
  auto out = runtime::validate(p, testing::hr_table(), load_app("hr"));
  for (const auto& r : out.report.rows) EXPECT_TRUE(is_root_to_leaf(p, r)) << r.rowIndex;
}

TEST(Validate, OwnRowReproducesScenario) {
  auto p = hr_program();
  auto table = testing::hr_table();
  for (const auto& s : testing::hr_scenarios()) {
    runtime::SimApp app(load_app("hr"));
    auto r = runtime::execute_row(p, table.schema, table.rows[s.sampleRowIndex], s.sampleRowIndex, app);
    ASSERT_TRUE(r.success()) << s.id;
    EXPECT_TRUE(follows_scenario(p, r, s)) << s.id;
  }
}

TEST(Progress, ObserverSeesEveryNode) {
  auto p = hr_program();
  auto table = testing::hr_table();
  runtime::ProgressChannel channel;
  runtime::ValidationOptions opts;
  opts.observer = channel.observer();
  auto out = runtime::validate(p, table, load_app("hr"), opts);
  channel.close();
  std::size_t events = 0;
  while (auto e = channel.pop()) {
    EXPECT_EQ(e->status, "ok");
    ++events;
  }
  std::size_t steps = 0;
  for (const auto& r : out.report.rows) steps += r.trajectory.size();
  EXPECT_EQ(events, steps);
}

}  // namespace
}  // namespace teachflow
