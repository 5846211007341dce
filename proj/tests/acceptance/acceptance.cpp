// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "commands.hpp"
#include "fixtures.hpp"
#include "merge_properties.hpp"
#include "oracle_stub.hpp"
#include "perturb.hpp"
#include "teachflow/dom/query.hpp"
#include "teachflow/dom/selector.hpp"
#include "teachflow/error.hpp"
#include "teachflow/semantic/oracle.hpp"
#include "teachflow/service/service.hpp"
#include "teachflow/synthesis/program.hpp"

namespace fs = std::filesystem;
namespace tt = teachflow::testing;
using namespace teachflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("teachflow-acceptance-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const fs::path& dataDir, std::vector<std::string> args) {
  args.insert(args.begin(), {"--data-dir", dataDir.string()});
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const synthesis::StepNode& skip_linear(const synthesis::AutomationProgram& p, std::string id) {
  while (p.node(id).kind == synthesis::NodeKind::Linear) id = p.node(id).next;
  return p.node(id);
}

bool is_leaf(const synthesis::AutomationProgram& p, const std::string& id, const std::string& decision) {
  const auto& n = p.node(id);
  return n.kind == synthesis::NodeKind::Leaf && n.decision == decision;
}

// search-results {"no records" -> Manual review; other -> resume {present -> Ready to go; absent -> Manual review}}
std::string hr_shape_error(const synthesis::AutomationProgram& p) {
  const auto& first = skip_linear(p, p.entry);
  if (first.kind != synthesis::NodeKind::Branch || first.objectRef != "search-results") {
    return "first branch is not on search-results";
  }
  if (first.arms.size() != 1 || !first.arms.count("no records")) return "search-results arms are not {no records}";
  if (!is_leaf(p, first.arms.at("no records"), "Manual review")) return "no records does not lead to Manual review";
  if (!first.elseArm || first.elseArm->excluded != std::vector<std::string>{"no records"}) {
    return "search-results has no other-arm excluding no records";
  }
  const auto& second = skip_linear(p, first.elseArm->next);
  if (second.kind != synthesis::NodeKind::Branch || second.objectRef != "resume") {
    return "other-arm does not reach the resume branch";
  }
  if (second.arms.size() != 2 || second.elseArm) return "resume branch is not exactly {present, absent}";
  if (!second.arms.count("present") || !is_leaf(p, second.arms.at("present"), "Ready to go")) {
    return "present does not lead to Ready to go";
  }
  if (!second.arms.count("absent") || !is_leaf(p, second.arms.at("absent"), "Manual review")) {
    return "absent does not lead to Manual review";
  }
  std::size_t branches = 0, leaves = 0;
  for (const auto& n : p.nodes) {
    branches += n.kind == synthesis::NodeKind::Branch;
    leaves += n.kind == synthesis::NodeKind::Leaf;
  }
  if (branches != 2 || leaves != 3) return "expected 2 branches and 3 leaves";
  return {};
}

Outcome hr_end_to_end() {
  TempDir dir("hr");
  const auto t0 = std::chrono::steady_clock::now();
  const auto F = tt::fixture("hr");
  auto r = cli(dir.path(), {"define", "HR Screening", "--csv", (F / "candidates.csv").string(), "--decisions",
                            "Ready to go,Manual review", "--decision-column", "Decision"});
  if (r.code != 0) return {false, "define failed: " + r.err};
  for (const auto& s : tt::kHrScenarios) {
    r = cli(dir.path(), {"teach", "hr-screening", "--trace", (F / s / "trace.jsonl").string(), "--scenario", s});
    if (r.code != 0) return {false, "teach " + s + " failed: " + r.err};
  }
  const auto out = dir.path() / "out.csv";
  r = cli(dir.path(), {"validate", "hr-screening", "--app", (F / "app.json").string(), "--out", out.string()});
  if (r.code != 0) return {false, "validate failed: " + r.err + r.out};
  const auto elapsed = seconds_since(t0);
  r = cli(dir.path(), {"map", "hr-screening"});
  const auto program = synthesis::import_map(r.out);
  if (auto e = hr_shape_error(program); !e.empty()) return {false, "map: " + e};
  const auto got = tt::csv_column(tt::read_text(out), "Decision");
  const auto want = tt::hr_expected_decisions();
  if (got != want) return {false, "decision column differs from the expected column"};
  if (elapsed >= 5.0) return {false, "took " + std::to_string(elapsed) + " s"};
  std::ostringstream d;
  d << "map matches, " << got.size() << "/" << want.size() << " decisions match, " << elapsed << " s";
  return {true, d.str()};
}

Outcome weather_extraction() {
  TempDir dir("weather");
  const auto t0 = std::chrono::steady_clock::now();
  const auto F = tt::fixture("weather");
  auto r = cli(dir.path(), {"define", "City temperatures", "--csv", (F / "cities.csv").string(),
                            "--extraction-column", "Temperature", "--app", (F / "app.json").string()});
  if (r.code != 0) return {false, "define failed: " + r.err};
  r = cli(dir.path(), {"teach", "city-temperatures", "--trace", (F / "city-lookup" / "trace.jsonl").string(),
                       "--scenario", "city-lookup"});
  if (r.code != 0) return {false, "teach failed: " + r.err};
  const auto out = dir.path() / "out.csv";
  r = cli(dir.path(), {"validate", "city-temperatures", "--out", out.string()});
  if (r.code != 0) return {false, "validate failed: " + r.err + r.out};
  const auto elapsed = seconds_since(t0);
  const auto got = tt::csv_column(tt::read_text(out), "Temperature");
  const auto want = tt::weather_expected_temperatures();
  if (got != want) return {false, "extraction column differs from the dataset temperatures"};
  if (elapsed >= 5.0) return {false, "took " + std::to_string(elapsed) + " s"};
  std::ostringstream d;
  d << got.size() << "/" << want.size() << " temperatures match, " << elapsed << " s";
  return {true, d.str()};
}

Outcome merge_properties() {
  const std::size_t cases = 1000;
  const auto run = tt::run_merge_properties(cases, 20261016);
  std::ostringstream d;
  d << run.cases << " families, " << run.scenarios << " scenarios, " << run.injectedConflicts
    << " injected conflicts, " << run.failures.size() << " failures";
  if (!run.failures.empty()) {
    const auto& f = run.failures.front();
    d << "; first: seed " << f.seed << " " << tt::to_string(f.property) << ": " << f.detail;
  }
  return {run.cases >= 1000 && run.failures.empty(), d.str()};
}

Outcome conflict_detection() {
  const auto table = tt::hr_table();
  const auto base = synthesis::synthesize_all(tt::hr_scenarios());
  if (!base.conflicts.empty()) return {false, "HR scenarios conflict"};
  const auto before = synthesis::export_map(base.program, synthesis::MapFormat::Json);
  const std::vector<std::pair<std::string, synthesis::Conflict::Kind>> cases = {
      {"divergence-without-condition", synthesis::Conflict::Kind::DivergenceWithoutCondition},
      {"step-mismatch", synthesis::Conflict::Kind::StepMismatch},
      {"duplicate-arm", synthesis::Conflict::Kind::DuplicateArm},
      {"decision-contradiction", synthesis::Conflict::Kind::DecisionContradiction},
  };
  std::size_t ok = 0;
  std::string detail;
  for (const auto& [name, kind] : cases) {
    const auto rec = tt::load_recording("conflicts/" + name);
    const auto row = cli::infer_row(rec.events, rec.snapshots, table);
    const auto steps = model::normalize_events(rec.events, rec.snapshots, table.schema, table.rows.at(row));
    const auto sc = model::make_scenario(name, name, steps, row, table.schema);
    const auto out = synthesis::merge_scenario(base.program, sc);
    const bool unchanged = synthesis::export_map(out.program, synthesis::MapFormat::Json) == before &&
                           out.program == base.program;
    if (out.conflict && out.conflict->kind == kind && unchanged) {
      ++ok;
    } else if (detail.empty()) {
      detail = "; " + name + ": " +
               (out.conflict ? std::string(synthesis::to_string(out.conflict->kind)) : std::string("no conflict")) +
               (unchanged ? "" : ", program changed");
    }
  }
  return {ok == cases.size(), std::to_string(ok) + "/4 kinds detected with the program unchanged" + detail};
}

void collect_html(const fs::path& dir, std::vector<fs::path>& out) {
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".html") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
}

Outcome selector_robustness() {
  std::vector<fs::path> files;
  collect_html(tt::fixture_dir(), files);
  std::size_t elements = 0, roundTrips = 0, attempts = 0, resolved = 0, pathOnlyMisses = 0, otherMisses = 0;
  std::string firstOther;
  for (const auto& f : files) {
    const auto snap = dom::parse_snapshot(tt::read_text(f), f.stem().string());
    for (auto i : snap.elements()) {
      ++elements;
      const auto& id = snap.node(i).nodeId;
      const auto spec = dom::generate_selector(snap, id);
      std::string back;
      try {
        back = dom::resolve_selector(snap, spec);
      } catch (const Error&) {
      }
      roundTrips += back == id;
      const auto unique = dom::first_unique(snap, spec);
      const bool pathOnly = !unique || *unique + 1 == spec.candidates.size();
      for (auto kind : {tt::Perturbation::ReorderAttributes, tt::Perturbation::InsertSiblingBefore}) {
        const auto html = tt::perturb(snap, i, kind);
        if (!html) continue;
        ++attempts;
        const auto changed = dom::parse_snapshot(*html, "perturbed");
        const auto want = tt::perturbed_node_id(snap, changed, i, kind);
        std::string got;
        try {
          got = dom::resolve_selector(changed, spec);
        } catch (const Error&) {
        }
        if (got == want) {
          ++resolved;
        } else if (pathOnly) {
          ++pathOnlyMisses;
        } else {
          ++otherMisses;
          if (firstOther.empty()) firstOther = f.filename().string() + " " + id;
        }
      }
    }
  }
  const double rate = attempts ? static_cast<double>(resolved) / static_cast<double>(attempts) : 0.0;
  std::ostringstream d;
  d << files.size() << " snapshots, " << roundTrips << "/" << elements << " round trips, " << resolved << "/"
    << attempts << " perturbed resolved (" << rate * 100 << "%), " << pathOnlyMisses << " path-only misses, "
    << otherMisses << " other misses";
  if (!firstOther.empty()) d << " (first: " << firstOther << ")";
  return {roundTrips == elements && rate >= 0.95 && otherMisses == 0, d.str()};
}

Outcome semantic_matrix() {
  const auto matrix = tt::read_json(tt::fixture("semantic/matrix.json"));
  auto stub = tt::OracleStub::from_file(tt::fixture("semantic/oracle-stub.json"));
  semantic::OracleConfig config;
  config.url = stub->url();
  auto client = std::make_shared<const semantic::OracleClient>(config);
  const semantic::ObjectDetector withOracle(semantic::SemanticCatalog::builtin(), client);
  const auto catalog = semantic::SemanticCatalog::builtin();
  std::size_t rules = 0, oracle = 0, total = 0;
  std::string miss;
  for (const auto& c : matrix.at("cases")) {
    ++total;
    const auto file = c.at("snapshot").get<std::string>();
    const auto snap = dom::parse_snapshot(tt::read_text(tt::fixture("semantic/" + file)), file);
    const auto hits = dom::Query::parse(c.at("select").get<std::string>()).select(snap, 0);
    if (hits.size() != 1) return {false, file + ": selection is not unique"};
    const auto nodeId = snap.node(hits.front()).nodeId;
    const auto want = c.at("state").get<std::string>();
    const auto kind = c.at("kind").get<std::string>();

    const auto rule = semantic::detect_objects(snap, nodeId, catalog);
    if (rule.kind == kind && semantic::evaluate_state(rule, snap) == want) {
      ++rules;
    } else if (miss.empty()) {
      miss = "; rules on " + file + " gave " + semantic::evaluate_state(rule, snap);
    }
    const auto before = stub->requests();
    const auto viaOracle = withOracle.detect(snap, nodeId);
    const bool answered = stub->requests() == before + 1 && !(viaOracle.predicate == rule.predicate);
    if (answered && viaOracle.kind == kind && semantic::evaluate_state(viaOracle, snap) == want) {
      ++oracle;
    } else if (miss.empty()) {
      miss = "; oracle on " + file + (answered ? " gave " + semantic::evaluate_state(viaOracle, snap) : " not used");
    }
  }
  return {total == 10 && rules == total && oracle == total,
          "rules " + std::to_string(rules) + "/" + std::to_string(total) + ", recorded oracle " +
              std::to_string(oracle) + "/" + std::to_string(total) + miss};
}

std::string records_json(const service::AutomationService& svc) {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : svc.list()) all.push_back(r);
  return all.dump();
}

Outcome determinism_and_persistence() {
  TempDir dir("persist");
  const auto fixed = [] { return std::chrono::system_clock::time_point(std::chrono::seconds(1790000000)); };
  auto options = [&] {
    service::ServiceOptions o;
    o.dataDir = dir.path();
    o.clock = fixed;
    return o;
  };
  const auto F = tt::fixture("hr");
  auto teach = [&](service::AutomationService& svc, const std::string& sid) {
    const auto rec = tt::load_recording("hr/" + sid);
    service::EventBatch batch;
    batch.events = rec.events;
    for (const auto& ref : rec.snapshots.refs()) batch.snapshots[ref] = rec.snapshots.get(ref).source_html();
    batch.rowIndex = tt::hr_row_of(sid);
    svc.post_events("hr", sid, batch);
    return svc.finish_scenario("hr", sid, std::nullopt);
  };

  std::string snapshotBefore;
  {
    service::AutomationService svc(options());
    svc.create("HR", "screening");
    svc.upload_sample("hr", {tt::read_text(F / "candidates.csv"), tt::kHrDecisions, "Decision", std::nullopt});
    svc.set_app("hr", tt::read_json(F / "app.json"));
    svc.advance("hr", model::Stage::Teach);
    teach(svc, "ready-to-go");
    teach(svc, "manual-review1");
    snapshotBefore = records_json(svc);
  }
  service::AutomationService svc(options());
  if (records_json(svc) != snapshotBefore) return {false, "records differ after restart"};
  if (teach(svc, "manual-review2").conflict) return {false, "third scenario conflicted after restart"};
  const auto afterTeach = records_json(svc);
  {
    service::AutomationService again(options());
    if (records_json(again) != afterTeach) return {false, "records differ after the second restart"};
  }
  svc.advance("hr", model::Stage::Validate);
  const auto a = svc.run_validation("hr");
  const auto b = svc.run_validation("hr");
  const auto ja = nlohmann::json(a.report).dump();
  const auto jb = nlohmann::json(b.report).dump();
  if (ja != jb || a.outputCsv != b.outputCsv) return {false, "two validation runs differ"};
  const auto finalRecords = records_json(svc);
  service::AutomationService reloaded(options());
  if (records_json(reloaded) != finalRecords) return {false, "records differ after restart post-validation"};
  return {true, "2 restarts reload identical records; repeated validation is byte-identical (" +
                    std::to_string(ja.size()) + " report bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 HR end-to-end reproduction", hr_end_to_end},
      {"AC2 weather extraction", weather_extraction},
      {"AC3 merge property suite", merge_properties},
      {"AC4 conflict detection", conflict_detection},
      {"AC5 selector robustness", selector_robustness},
      {"AC6 semantic state matrix", semantic_matrix},
      {"AC7 determinism and persistence", determinism_and_persistence},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
