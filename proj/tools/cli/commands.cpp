// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "teachflow/dom/label.hpp"
#include "teachflow/dom/selector.hpp"
#include "teachflow/error.hpp"
#include "teachflow/params/binding.hpp"
#include "teachflow/service/service.hpp"
#include "teachflow/text.hpp"

namespace teachflow::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  out << data;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::BadRequest:
    case ErrorCode::NotFound: return kUsage;
    default: return kDomain;
  }
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t pos = 0;
    while (pos <= item.size()) {
      auto comma = item.find(',', pos);
      if (comma == std::string::npos) comma = item.size();
      auto v = text::trim(std::string_view(item).substr(pos, comma - pos));
      if (!v.empty()) out.push_back(v);
      pos = comma + 1;
    }
  }
  return out;
}

std::string step_line(const model::Step& s) {
  std::string line = std::string(model::to_string(s.kind)) + " " + s.label;
  if (s.kind == model::StepKind::Type && s.binding) line += " <- " + model::describe(*s.binding);
  if (s.kind == model::StepKind::AssertState && s.stateName) line += " is \"" + *s.stateName + "\"";
  if (s.kind == model::StepKind::Extract && s.extractionTarget) line += " -> column " + *s.extractionTarget;
  return line;
}

void print_coverage(std::ostream& out, const synthesis::CoverageReport& c) {
  if (c.complete()) {
    out << "coverage complete\n";
    return;
  }
  out << "coverage incomplete\n";
  for (const auto& d : c.uncoveredDecisions) out << "  missing decision: " << d << "\n";
  for (const auto& s : c.uncoveredStates) out << "  missing state: " << s.objectRef << " " << s.stateName << "\n";
  for (const auto& s : c.suggestions) out << "  suggestion: " << s.text << "\n";
}

void print_conflict(std::ostream& err, const synthesis::Conflict& c) {
  err << "conflict " << synthesis::to_string(c.kind) << " in scenario " << c.scenarioId << ": " << c.message << "\n";
}

struct Globals {
  std::string dataDir;

  service::AutomationService open() const {
    service::ServiceOptions opts;
    opts.dataDir = dataDir;
    opts.oracle = semantic::OracleConfig::from_env();
    return service::AutomationService(std::move(opts));
  }
};

}  // namespace

std::size_t infer_row(const std::vector<model::ActionEvent>& events, const model::SnapshotStore& snapshots,
                      const model::SampleTable& table) {
  (void)snapshots;
  std::size_t best = 0;
  std::size_t bestHits = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::size_t hits = 0;
    params::BindingContext ctx{table.schema, table.rows[r]};
    std::optional<std::string> lastTarget;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      if (e.kind != model::EventKind::Type) continue;
      // Only the final value of a typing run counts.
      std::size_t j = i + 1;
      while (j < events.size() && events[j].kind == model::EventKind::Ignore) ++j;
      if (j < events.size() && events[j].kind == model::EventKind::Type && events[j].targetNode == e.targetNode) {
        continue;
      }
      if (std::holds_alternative<model::ColumnRef>(params::map_value(*e.typedValue, ctx))) ++hits;
    }
    if (hits > bestHits) {
      best = r;
      bestHits = hits;
    }
  }
  return best;
}

int run(const std::vector<std::string>& argsIn, std::ostream& out, std::ostream& err) {
  CLI::App app{"Teach browser automations by demonstration, then validate them over sample rows."};
  app.name("teachflow");
  app.require_subcommand(1);
  Globals g;
  const char* envDir = std::getenv("DATA_DIR");
  g.dataDir = envDir && *envDir ? envDir : "teachflow-data";
  app.add_option("--data-dir", g.dataDir, "Directory holding automation records (default: $DATA_DIR)");

  int code = kOk;

  // define
  std::string defName, defDescription, defCsv, defDecisionColumn, defExtractionColumn, defApp;
  std::vector<std::string> defDecisions;
  auto* define = app.add_subcommand("define", "Create an automation from a sample CSV");
  define->add_option("name", defName, "Automation name")->required();
  define->add_option("--csv", defCsv, "Sample table (CSV with header)")->required();
  define->add_option("--decisions", defDecisions, "Allowed decision values (comma separated or repeated)");
  define->add_option("--decision-column", defDecisionColumn, "Output column for decisions");
  define->add_option("--extraction-column", defExtractionColumn, "Output column for extracted text");
  define->add_option("--description", defDescription, "Free text");
  define->add_option("--app", defApp, "Simulated application spec used for validation");
  define->callback([&] {
    auto svc = g.open();
    service::SampleUpload up;
    up.csv = read_file(defCsv);
    up.decisionValues = split_list(defDecisions);
    if (!defDecisionColumn.empty()) up.decisionColumn = defDecisionColumn;
    if (!up.decisionValues.empty() && !up.decisionColumn) up.decisionColumn = "Decision";
    if (!defExtractionColumn.empty()) up.extractionColumn = defExtractionColumn;
    // Reject a bad table before anything is written.
    model::load_sample_table(up.csv, up.decisionValues, up.decisionColumn, up.extractionColumn);
    std::optional<json> appSpec;
    if (!defApp.empty()) {
      appSpec = json::parse(read_file(defApp));
      runtime::SimAppSpec::from_json(*appSpec);
    }
    const auto rec = svc.create(defName, defDescription);
    const auto schema = svc.upload_sample(rec.id, up);
    if (appSpec) svc.set_app(rec.id, *appSpec);
    svc.advance(rec.id, model::Stage::Teach);
    out << rec.id << "\n";
    out << "columns: " << text::join(schema.columns, ", ") << "\n";
    if (schema.targetDecisionColumn) {
      out << "decisions (" << *schema.targetDecisionColumn << "): " << text::join(schema.decisionValues, ", ") << "\n";
    }
    if (schema.targetExtractionColumn) out << "extraction column: " << *schema.targetExtractionColumn << "\n";
    out << "stage: Teach\n";
  });

  // teach
  std::string teachId, teachTrace, teachSnapshots, teachScenario, teachDecision;
  std::optional<std::size_t> teachRow;
  auto* teach = app.add_subcommand("teach", "Add one recorded demonstration");
  teach->add_option("id", teachId, "Automation id")->required();
  teach->add_option("--trace", teachTrace, "Trace file (JSON lines)")->required();
  teach->add_option("--snapshots", teachSnapshots, "Directory of <snapshotRef>.html files");
  teach->add_option("--scenario", teachScenario, "Scenario name")->required();
  teach->add_option("--decision", teachDecision, "Decision, when the trace does not record one");
  teach->add_option("--row", teachRow, "Sample row used while demonstrating (inferred by default)");
  teach->callback([&] {
    auto svc = g.open();
    const auto events = model::parse_trace(read_file(teachTrace));
    const auto dir = teachSnapshots.empty() ? std::filesystem::path(teachTrace).parent_path() / "snapshots"
                                            : std::filesystem::path(teachSnapshots);
    auto store = model::SnapshotStore::load_directory(dir);
    service::EventBatch batch;
    batch.events = events;
    for (const auto& e : events) {
      if (!batch.snapshots.count(e.snapshotRef) && store.contains(e.snapshotRef)) {
        batch.snapshots[e.snapshotRef] = store.get(e.snapshotRef).source_html();
      }
    }
    const auto rec = svc.get(teachId);
    if (!rec.sample) throw Error(ErrorCode::GuardFailed, "automation has no sample table");
    batch.rowIndex = teachRow ? *teachRow : infer_row(events, store, *rec.sample);
    batch.name = teachScenario;
    auto sid = text::slugify(teachScenario);
    if (sid.empty()) throw Error(ErrorCode::BadRequest, "scenario name has no usable characters");
    if (rec.find_pending(sid)) svc.delete_scenario(teachId, sid);
    const auto fb = svc.post_events(teachId, sid, batch);
    out << "scenario " << sid << " (sample row " << *batch.rowIndex << ")\n";
    for (std::size_t i = 0; i < fb.steps.size(); ++i) out << "  " << i + 1 << ". " << step_line(fb.steps[i]) << "\n";
    std::optional<std::string> decision;
    if (!teachDecision.empty()) decision = teachDecision;
    const auto outcome = svc.finish_scenario(teachId, sid, decision);
    if (outcome.conflict) {
      print_conflict(err, *outcome.conflict);
      svc.delete_scenario(teachId, sid);
      code = kDomain;
      return;
    }
    out << "merged; program has " << outcome.program.nodes.size() << " nodes from "
        << outcome.program.contributingScenarios.size() << " scenario(s)\n";
    if (outcome.coverage) print_coverage(out, *outcome.coverage);
  });

  // validate
  std::string valId, valApp, valOut, valReport;
  auto* validate = app.add_subcommand("validate", "Replay the program over every sample row");
  validate->add_option("id", valId, "Automation id")->required();
  validate->add_option("--app", valApp, "Simulated application spec (default: the one stored at define)");
  validate->add_option("--out", valOut, "Output CSV path");
  validate->add_option("--report", valReport, "Write the JSON validation report here");
  validate->callback([&] {
    auto svc = g.open();
    std::optional<json> appSpec;
    if (!valApp.empty()) appSpec = json::parse(read_file(valApp));
    const auto result = svc.run_validation(valId, appSpec);
    if (!valOut.empty()) write_file(valOut, result.outputCsv);
    if (!valReport.empty()) write_file(valReport, json(result.report).dump(2) + "\n");
    for (const auto& r : result.report.rows) {
      out << "row " << r.rowIndex << ": ";
      if (r.success()) {
        out << "ok";
        if (r.decisionWritten) out << " decision=\"" << *r.decisionWritten << "\"";
        if (r.extractedValue) out << " extracted=\"" << *r.extractedValue << "\"";
      } else {
        out << "FAILED " << to_string(r.failure->code) << " at step " << r.failure->stepPosition << ": "
            << r.failure->message;
      }
      out << "\n";
    }
    const auto failed = result.report.failed_rows();
    out << result.report.rows.size() - failed << "/" << result.report.rows.size() << " rows succeeded\n";
    out << "stage: " << model::to_string(svc.get(valId).lifecycle.stage) << "\n";
    if (failed > 0) code = kDomain;
  });

  // map
  std::string mapId;
  bool mapDot = false;
  auto* map = app.add_subcommand("map", "Print the synthesized program");
  map->add_option("id", mapId, "Automation id")->required();
  map->add_flag("--dot", mapDot, "Graphviz output instead of JSON");
  map->callback([&] {
    auto svc = g.open();
    out << svc.program(mapId, mapDot ? synthesis::MapFormat::Dot : synthesis::MapFormat::Json);
  });

  // coverage
  std::string covId;
  auto* cov = app.add_subcommand("coverage", "Show undemonstrated decisions and states");
  cov->add_option("id", covId, "Automation id")->required();
  cov->callback([&] {
    auto svc = g.open();
    print_coverage(out, svc.coverage(covId));
  });

  // advance
  std::string advId, advStage;
  auto* adv = app.add_subcommand("advance", "Move the automation to another lifecycle stage");
  adv->add_option("id", advId, "Automation id")->required();
  adv->add_option("stage", advStage, "Define, Teach, Validate or ReadyToDeploy")->required();
  adv->callback([&] {
    auto svc = g.open();
    out << "stage: " << model::to_string(svc.advance(advId, model::parse_stage(advStage)).stage) << "\n";
  });

  // forget
  std::string forgetId, forgetScenario;
  auto* forget = app.add_subcommand("forget", "Remove a scenario and re-synthesize");
  forget->add_option("id", forgetId, "Automation id")->required();
  forget->add_option("scenario", forgetScenario, "Scenario id")->required();
  forget->callback([&] {
    auto svc = g.open();
    svc.delete_scenario(forgetId, forgetScenario);
    out << "removed " << forgetScenario << "\n";
  });

  // list / show
  auto* list = app.add_subcommand("list", "List automations");
  list->callback([&] {
    auto svc = g.open();
    for (const auto& r : svc.list()) {
      out << r.id << "\t" << model::to_string(r.lifecycle.stage) << "\t" << r.scenarios.size() << " scenario(s)\t"
          << r.name << "\n";
    }
  });
  std::string showId;
  auto* show = app.add_subcommand("show", "Print an automation record as JSON");
  show->add_option("id", showId, "Automation id")->required();
  show->callback([&] {
    auto svc = g.open();
    out << service::summary_json(svc.get(showId)).dump(2) << "\n";
  });

  // record
  std::string recApp, recScript, recTrace, recSnapshots;
  auto* record = app.add_subcommand("record", "Play a gesture script against a simulated app and save the trace");
  record->add_option("--app", recApp, "Simulated application spec")->required();
  record->add_option("--script", recScript, "Gesture script (JSON)")->required();
  record->add_option("--trace", recTrace, "Trace file to write")->required();
  record->add_option("--snapshots", recSnapshots, "Directory for snapshot HTML files")->required();
  record->callback([&] {
    const auto spec = runtime::SimAppSpec::load(recApp);
    const auto rec = record_gestures(spec, json::parse(read_file(recScript)));
    write_file(recTrace, model::write_trace(rec.events));
    for (const auto& [ref, html] : rec.snapshots) {
      write_file(std::filesystem::path(recSnapshots) / (ref + ".html"), html);
    }
    out << rec.events.size() << " events, " << rec.snapshots.size() << " snapshots\n";
  });

  // nodes
  std::string nodesFile;
  auto* nodes = app.add_subcommand("nodes", "List the elements of a snapshot with labels and selectors");
  nodes->add_option("html", nodesFile, "Snapshot HTML file")->required();
  nodes->callback([&] {
    const auto snap = dom::parse_snapshot(read_file(nodesFile), std::filesystem::path(nodesFile).stem().string());
    for (auto i : snap.elements()) {
      const auto& n = snap.node(i);
      const auto spec = dom::generate_selector(snap, n.nodeId);
      out << n.nodeId << "\t<" << n.tag << ">\t" << dom::associate_label(snap, n.nodeId) << "\t"
          << dom::describe(spec.candidates.front()) << "\n";
    }
  });

  std::vector<std::string> args(argsIn.rbegin(), argsIn.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "teachflow: " << e.what() << "\n";
    if (e.get_exit_code() == 0) return kOk;
    return kUsage;
  } catch (const Error& e) {
    err << "teachflow: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "teachflow: invalid JSON: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "teachflow: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}

}  // namespace teachflow::cli
