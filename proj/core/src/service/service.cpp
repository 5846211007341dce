// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/service/service.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "teachflow/error.hpp"
#include "teachflow/model/normalize.hpp"
#include "teachflow/text.hpp"

namespace teachflow::service {

using nlohmann::json;

namespace detail {

struct Session {
  std::shared_mutex mu;
  AutomationRecord rec;
  bool validating = false;  // guarded by mu
};

}  // namespace detail

RecordStore::RecordStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create data directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path RecordStore::path_for(const std::string& id) const { return dir_ / (id + ".json"); }

void RecordStore::save(const AutomationRecord& record) const {
  const auto target = path_for(record.id);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << json(record).dump(1) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot replace " + target.string() + ": " + ec.message());
}

std::vector<AutomationRecord> RecordStore::load_all() const {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<AutomationRecord> out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      out.push_back(json::parse(buf.str()).get<AutomationRecord>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedProgram, f.string() + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::shared_ptr<const semantic::OracleClient> make_oracle(const std::optional<semantic::OracleConfig>& cfg) {
  if (!cfg || cfg->url.empty()) return nullptr;
  return std::make_shared<const semantic::OracleClient>(*cfg);
}

bool valid_scenario_id(const std::string& sid) {
  return !sid.empty() && sid.size() <= 128 && std::all_of(sid.begin(), sid.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

void require_stage(const AutomationRecord& r, model::Stage stage, const std::string& what) {
  if (r.lifecycle.stage != stage) {
    throw Error(ErrorCode::GuardFailed, what + " is only possible in the " + std::string(model::to_string(stage)) +
                                            " stage (automation is in " +
                                            std::string(model::to_string(r.lifecycle.stage)) + ")");
  }
}

model::SnapshotStore snapshot_store(const PendingScenario& p) {
  model::SnapshotStore store;
  for (const auto& [ref, html] : p.snapshots) store.add(ref, html);
  return store;
}

const model::Row& sample_row(const AutomationRecord& r, std::size_t index) {
  if (!r.sample) throw Error(ErrorCode::GuardFailed, "no sample table loaded");
  if (index >= r.sample->rows.size()) {
    throw Error(ErrorCode::BadRequest, "sample row " + std::to_string(index) + " does not exist");
  }
  return r.sample->rows[index];
}

std::optional<synthesis::CoverageReport> try_coverage(const AutomationRecord& r) {
  if (!r.sample || !r.conflicts.empty()) return std::nullopt;
  return synthesis::coverage(r.program, r.sample->schema);
}

}  // namespace

AutomationService::AutomationService(ServiceOptions options)
    : options_(std::move(options)), store_(options_.dataDir), detector_(semantic::SemanticCatalog::builtin(),
                                                                          make_oracle(options_.oracle)) {
  for (auto& rec : store_.load_all()) {
    auto s = std::make_shared<detail::Session>();
    auto id = rec.id;
    s->rec = std::move(rec);
    sessions_.emplace(std::move(id), std::move(s));
  }
}

AutomationService::~AutomationService() = default;

std::shared_ptr<detail::Session> AutomationService::session(const std::string& id) const {
  std::shared_lock lock(registryMu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no automation " + id);
  return it->second;
}

void AutomationService::persist(const AutomationRecord& r) const { store_.save(r); }

AutomationRecord AutomationService::create(const std::string& name, const std::string& description,
                                           const std::string& templateKind) {
  const auto clean = text::trim(name);
  if (clean.empty()) throw Error(ErrorCode::BadRequest, "name is required");
  if (templateKind != kTemplateKind && templateKind != "table->automation->table" &&
      templateKind != "table-automation-table") {
    throw Error(ErrorCode::BadRequest, "unsupported template kind " + templateKind);
  }
  std::unique_lock lock(registryMu_);
  for (const auto& [id, s] : sessions_) {
    std::shared_lock slock(s->mu);
    if (s->rec.name == clean) throw Error(ErrorCode::DuplicateName, "an automation named \"" + clean + "\" exists");
  }
  auto base = text::slugify(clean);
  if (base.empty()) base = "automation";
  auto id = base;
  for (int n = 2; sessions_.count(id); ++n) id = base + "-" + std::to_string(n);

  auto s = std::make_shared<detail::Session>();
  s->rec.id = id;
  s->rec.name = clean;
  s->rec.description = description;
  persist(s->rec);
  sessions_.emplace(id, s);
  return s->rec;
}

std::vector<AutomationRecord> AutomationService::list() const {
  std::vector<std::shared_ptr<detail::Session>> all;
  {
    std::shared_lock lock(registryMu_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  std::vector<AutomationRecord> out;
  for (const auto& s : all) {
    std::shared_lock lock(s->mu);
    out.push_back(s->rec);
  }
  return out;
}

AutomationRecord AutomationService::get(const std::string& id) const {
  auto s = session(id);
  std::shared_lock lock(s->mu);
  return s->rec;
}

model::InputSchema AutomationService::upload_sample(const std::string& id, const SampleUpload& upload) {
  auto s = session(id);
  std::unique_lock lock(s->mu);
  require_stage(s->rec, model::Stage::Define, "uploading a sample");
  auto table = model::load_sample_table(upload.csv, upload.decisionValues, upload.decisionColumn,
                                        upload.extractionColumn);
  auto next = s->rec;
  next.sample = std::move(table);
  persist(next);
  s->rec = std::move(next);
  return s->rec.sample->schema;
}

void AutomationService::set_app(const std::string& id, const json& appSpec) {
  runtime::SimAppSpec::from_json(appSpec);
  auto s = session(id);
  std::unique_lock lock(s->mu);
  auto next = s->rec;
  next.appSpec = appSpec;
  persist(next);
  s->rec = std::move(next);
}

EventFeedback AutomationService::post_events(const std::string& id, const std::string& scenarioId,
                                             const EventBatch& batch) {
  if (!valid_scenario_id(scenarioId)) throw Error(ErrorCode::BadRequest, "invalid scenario id " + scenarioId);
  auto s = session(id);
  std::unique_lock lock(s->mu);
  require_stage(s->rec, model::Stage::Teach, "recording");
  const auto& rec = s->rec;
  if (std::any_of(rec.scenarios.begin(), rec.scenarios.end(),
                  [&](const model::Scenario& sc) { return sc.id == scenarioId; })) {
    throw Error(ErrorCode::Conflict, "scenario " + scenarioId + " is already finished");
  }

  PendingScenario before;
  before.id = scenarioId;
  before.name = scenarioId;
  if (const auto* p = rec.find_pending(scenarioId)) before = *p;
  PendingScenario after = before;
  if (batch.name) after.name = *batch.name;
  if (batch.rowIndex) after.rowIndex = *batch.rowIndex;
  for (const auto& [ref, html] : batch.snapshots) after.snapshots[ref] = html;
  after.events.insert(after.events.end(), batch.events.begin(), batch.events.end());

  const auto& row = sample_row(rec, after.rowIndex);
  const auto& schema = rec.sample->schema;
  auto steps = model::normalize_events(after.events, snapshot_store(after), schema, row, detector_);
  std::vector<model::Step> old;
  if (!before.events.empty()) {
    old = model::normalize_events(before.events, snapshot_store(before), schema,
                                  sample_row(rec, before.rowIndex), detector_);
  }
  std::size_t common = 0;
  while (common < old.size() && common < steps.size() && old[common] == steps[common]) ++common;

  auto next = rec;
  if (auto* p = next.find_pending(scenarioId)) {
    *p = std::move(after);
  } else {
    next.pending.push_back(std::move(after));
  }
  persist(next);
  s->rec = std::move(next);
  return EventFeedback{steps, std::vector<model::Step>(steps.begin() + static_cast<std::ptrdiff_t>(common), steps.end())};
}

FinishOutcome AutomationService::finish_scenario(const std::string& id, const std::string& scenarioId,
                                                 const std::optional<std::string>& decision) {
  auto s = session(id);
  std::unique_lock lock(s->mu);
  require_stage(s->rec, model::Stage::Teach, "finishing a scenario");
  const auto& rec = s->rec;
  const auto* found = rec.find_pending(scenarioId);
  if (!found) throw Error(ErrorCode::NotFound, "no scenario " + scenarioId + " is being recorded");
  PendingScenario pending = *found;
  const auto& schema = rec.sample->schema;

  if (decision) {
    if (!schema.targetDecisionColumn || !schema.allows_decision(*decision)) {
      throw Error(ErrorCode::KindFieldMismatch, "\"" + *decision + "\" is not a decision value");
    }
    const bool decided = !pending.events.empty() && pending.events.back().kind == model::EventKind::Decide;
    if (decided && pending.events.back().decision != decision) {
      throw Error(ErrorCode::KindFieldMismatch, "scenario already decides \"" +
                                                    pending.events.back().decision.value_or("") + "\"");
    }
    if (!decided) {
      model::ActionEvent e;
      e.seq = pending.events.empty() ? 1 : pending.events.back().seq + 1;
      e.kind = model::EventKind::Decide;
      e.snapshotRef = pending.events.empty() ? std::string{} : pending.events.back().snapshotRef;
      e.decision = decision;
      pending.events.push_back(std::move(e));
    }
  }
  auto steps = model::normalize_events(pending.events, snapshot_store(pending), schema,
                                       sample_row(rec, pending.rowIndex), detector_);
  auto scenario = model::make_scenario(pending.id, pending.name, std::move(steps), pending.rowIndex, schema);
  auto merged = synthesis::merge_scenario(rec.program, scenario);

  auto next = rec;
  FinishOutcome out;
  if (merged.conflict) {
    next.conflicts = {*merged.conflict};
    next.coverage.reset();
    out.conflict = merged.conflict;
  } else {
    next.program = std::move(merged.program);
    next.scenarios.push_back(std::move(scenario));
    std::erase_if(next.pending, [&](const PendingScenario& p) { return p.id == scenarioId; });
    next.conflicts.clear();
    next.coverage = try_coverage(next);
    out.coverage = next.coverage;
  }
  out.program = next.program;
  persist(next);
  s->rec = std::move(next);
  return out;
}

void AutomationService::delete_scenario(const std::string& id, const std::string& scenarioId) {
  auto s = session(id);
  std::unique_lock lock(s->mu);
  require_stage(s->rec, model::Stage::Teach, "deleting a scenario");
  auto next = s->rec;
  if (next.find_pending(scenarioId)) {
    std::erase_if(next.pending, [&](const PendingScenario& p) { return p.id == scenarioId; });
    std::erase_if(next.conflicts, [&](const synthesis::Conflict& c) { return c.scenarioId == scenarioId; });
  } else {
    const auto before = next.scenarios.size();
    std::erase_if(next.scenarios, [&](const model::Scenario& sc) { return sc.id == scenarioId; });
    if (next.scenarios.size() == before) throw Error(ErrorCode::NotFound, "no scenario " + scenarioId);
    auto synth = synthesis::synthesize_all(next.scenarios);
    next.program = std::move(synth.program);
    next.conflicts = std::move(synth.conflicts);
  }
  next.coverage = try_coverage(next);
  persist(next);
  s->rec = std::move(next);
}

std::string AutomationService::program(const std::string& id, synthesis::MapFormat format) const {
  auto s = session(id);
  std::shared_lock lock(s->mu);
  return synthesis::export_map(s->rec.program, format);
}

synthesis::CoverageReport AutomationService::coverage(const std::string& id) const {
  auto s = session(id);
  std::shared_lock lock(s->mu);
  if (!s->rec.sample) throw Error(ErrorCode::GuardFailed, "no sample table loaded");
  return synthesis::coverage(s->rec.program, s->rec.sample->schema, s->rec.conflicts);
}

std::unique_ptr<ValidationJob> AutomationService::begin_validation(const std::string& id,
                                                                   const std::optional<json>& appSpec) {
  auto s = session(id);
  std::unique_lock lock(s->mu);
  if (s->validating) throw Error(ErrorCode::Conflict, "a validation run is already in progress");
  if (!s->rec.conflicts.empty()) {
    throw Error(ErrorCode::InconsistentProgram, "the program has unresolved conflicts: " + s->rec.conflicts.front().message);
  }
  auto next = s->rec;
  if (next.lifecycle.stage == model::Stage::Teach) {
    next.lifecycle = model::advance_lifecycle(next.lifecycle, model::Stage::Validate, next.status());
  } else if (next.lifecycle.stage == model::Stage::Define) {
    throw Error(ErrorCode::GuardFailed, "nothing has been taught yet");
  }
  if (appSpec) next.appSpec = *appSpec;
  if (!next.appSpec) throw Error(ErrorCode::BadRequest, "no simulated application configured");
  auto app = std::make_shared<const runtime::SimAppSpec>(runtime::SimAppSpec::from_json(*next.appSpec));
  if (next != s->rec) {
    persist(next);
    s->rec = next;
  }
  s->validating = true;
  return std::unique_ptr<ValidationJob>(
      new ValidationJob(*this, s, id, next.program, *next.sample, std::move(app)));
}

runtime::ValidationResult AutomationService::run_validation(const std::string& id,
                                                            const std::optional<json>& appSpec,
                                                            const runtime::ProgressObserver& observer) {
  return begin_validation(id, appSpec)->run(observer);
}

void AutomationService::complete_validation(const std::string& id, const runtime::ValidationResult& result) {
  auto s = session(id);
  std::unique_lock lock(s->mu);
  auto next = s->rec;
  next.lastValidation = result.report;
  next.lastOutputCsv = result.outputCsv;
  if (next.lifecycle.stage == model::Stage::Validate &&
      !model::lifecycle_blocker(next.lifecycle, model::Stage::ReadyToDeploy, next.status())) {
    next.lifecycle.stage = model::Stage::ReadyToDeploy;
  }
  persist(next);
  s->rec = std::move(next);
}

model::LifecycleState AutomationService::advance(const std::string& id, model::Stage target) {
  auto s = session(id);
  std::unique_lock lock(s->mu);
  auto next = s->rec;
  next.lifecycle = model::advance_lifecycle(next.lifecycle, target, next.status());
  persist(next);
  s->rec = std::move(next);
  return s->rec.lifecycle;
}

ValidationJob::ValidationJob(AutomationService& service, std::shared_ptr<detail::Session> session, std::string id,
                             synthesis::AutomationProgram program, model::SampleTable table,
                             std::shared_ptr<const runtime::SimAppSpec> app)
    : service_(service),
      session_(std::move(session)),
      id_(std::move(id)),
      program_(std::move(program)),
      table_(std::move(table)),
      app_(std::move(app)) {}

ValidationJob::~ValidationJob() {
  std::unique_lock lock(session_->mu);
  session_->validating = false;
}

runtime::ValidationResult ValidationJob::run(const runtime::ProgressObserver& observer) {
  runtime::ValidationOptions opts;
  opts.observer = observer;
  opts.clock = service_.options_.clock;
  auto result = runtime::validate(program_, table_, app_, opts);
  service_.complete_validation(id_, result);
  return result;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::BadRequest:
    case ErrorCode::MalformedTrace: return 400;
    case ErrorCode::DuplicateName:
    case ErrorCode::Conflict:
    case ErrorCode::GuardFailed:
    case ErrorCode::InconsistentProgram: return 409;
    case ErrorCode::Io:
    case ErrorCode::OracleUnreachable: return 500;
    default: return 422;
  }
}

}  // namespace teachflow::service
