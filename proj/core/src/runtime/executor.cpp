// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/runtime/executor.hpp"

#include <ctime>

#include "teachflow/csv.hpp"
#include "teachflow/params/binding.hpp"
#include "teachflow/semantic/detector.hpp"

namespace teachflow::runtime {

using nlohmann::json;

void ProgressChannel::push(ProgressEvent event) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    queue_.push_back(std::move(event));
  }
  cv_.notify_all();
}

void ProgressChannel::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::optional<ProgressEvent> ProgressChannel::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  auto e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::optional<ProgressEvent> ProgressChannel::pop_for(std::chrono::milliseconds timeout, bool& closed) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !queue_.empty(); });
  closed = closed_ && queue_.empty();
  if (queue_.empty()) return std::nullopt;
  auto e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

ProgressObserver ProgressChannel::observer() {
  return [this](const ProgressEvent& e) { push(e); };
}

namespace {

class RowRunner {
 public:
  RowRunner(const synthesis::AutomationProgram& program, const model::InputSchema& schema,
            const model::Row& row, std::size_t rowIndex, Driver& driver, const ProgressObserver& observer)
      : program_(program), schema_(schema), row_(row), driver_(driver), observer_(observer) {
    result_.rowIndex = rowIndex;
  }

  RowResult run() {
    std::string cur = program_.entry;
    std::string label;
    try {
      while (true) {
        const auto& n = program_.node(cur);
        label = n.kind == synthesis::NodeKind::Linear   ? n.step->label
                : n.kind == synthesis::NodeKind::Branch ? n.label
                : n.kind == synthesis::NodeKind::Leaf   ? *n.decision
                                                        : std::string("end");
        switch (n.kind) {
          case synthesis::NodeKind::Linear:
            perform(*n.step);
            record(n.id, label, std::nullopt);
            cur = n.next;
            break;
          case synthesis::NodeKind::Branch: {
            const auto state = semantic::evaluate_state(*n.object, driver_.current());
            cur = choose(n, state);
            record(n.id, label, state);
            break;
          }
          case synthesis::NodeKind::Leaf:
            result_.decisionWritten = n.decision;
            record(n.id, label, std::nullopt);
            return std::move(result_);
          case synthesis::NodeKind::ExtractLeaf:
            record(n.id, label, std::nullopt);
            return std::move(result_);
        }
      }
    } catch (const Error& e) {
      result_.failure = RowFailure{e.code(), e.what(), result_.trajectory.size()};
      if (observer_) observer_({result_.rowIndex, cur, label, "failed"});
    }
    return std::move(result_);
  }

 private:
  void perform(const model::Step& step) {
    switch (step.kind) {
      case model::StepKind::Click:
        driver_.click(driver_.resolve(*step.selector));
        break;
      case model::StepKind::Type: {
        const auto target = driver_.resolve(*step.selector);
        const auto value = step.binding ? params::bind_value(*step.binding, params::BindingContext{schema_, row_})
                                        : step.demonstratedValue.value_or("");
        driver_.type(target, value);
        break;
      }
      case model::StepKind::Extract:
        result_.extractedValue = driver_.read_text(driver_.resolve(*step.selector));
        break;
      case model::StepKind::SelectObject:
      case model::StepKind::AssertState:
      case model::StepKind::Decide:
        break;
    }
  }

  std::string choose(const synthesis::StepNode& n, const std::string& state) const {
    if (auto it = n.arms.find(state); it != n.arms.end()) return it->second;
    if (n.elseArm && n.elseArm->admits(state)) return n.elseArm->next;
    throw Error(ErrorCode::UnmatchedState, n.objectRef + " is \"" + state + "\", which no branch of " + n.label +
                                               " handles");
  }

  void record(const std::string& nodeId, const std::string& label, std::optional<std::string> state) {
    result_.trajectory.push_back({nodeId, label, std::move(state)});
    if (observer_) observer_({result_.rowIndex, nodeId, label, "ok"});
  }

  const synthesis::AutomationProgram& program_;
  const model::InputSchema& schema_;
  const model::Row& row_;
  Driver& driver_;
  const ProgressObserver& observer_;
  RowResult result_;
};

}  // namespace

RowResult execute_row(const synthesis::AutomationProgram& program, const model::InputSchema& schema,
                      const model::Row& row, std::size_t rowIndex, Driver& driver,
                      const ProgressObserver& observer) {
  return RowRunner(program, schema, row, rowIndex, driver, observer).run();
}

std::size_t ValidationReport::failed_rows() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.success() ? 0 : 1;
  return n;
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const auto secs = std::chrono::system_clock::to_time_t(t);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms < 0 ? ms + 1000 : ms));
  return out;
}

ValidationResult validate(const synthesis::AutomationProgram& program, const model::SampleTable& table,
                          std::shared_ptr<const SimAppSpec> app, const ValidationOptions& options) {
  if (program.empty()) throw Error(ErrorCode::InconsistentProgram, "nothing has been taught yet");
  try {
    synthesis::check_program(program, &table.schema);
  } catch (const Error& e) {
    throw Error(ErrorCode::InconsistentProgram, e.what());
  }
  const Clock clock = options.clock ? options.clock : Clock([] { return std::chrono::system_clock::now(); });
  ValidationResult out;
  out.report.startedAt = format_timestamp(clock());
  SimApp sim(app);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0) sim.reset();
    out.report.rows.push_back(execute_row(program, table.schema, table.rows[i], i, sim, options.observer));
  }
  out.report.finishedAt = format_timestamp(clock());
  out.outputCsv = output_csv(table, out.report);
  return out;
}

std::string output_csv(const model::SampleTable& table, const ValidationReport& report) {
  std::vector<csv::Record> records{table.schema.output_header()};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    csv::Record rec;
    for (const auto& c : table.schema.columns) rec.push_back(table.rows[i].at(c));
    const RowResult* r = i < report.rows.size() ? &report.rows[i] : nullptr;
    if (table.schema.targetDecisionColumn) rec.push_back(r ? r->decisionWritten.value_or("") : "");
    if (table.schema.targetExtractionColumn) rec.push_back(r ? r->extractedValue.value_or("") : "");
    records.push_back(std::move(rec));
  }
  return csv::write(records);
}

void to_json(json& j, const RowResult& r) {
  json traj = json::array();
  for (const auto& t : r.trajectory) {
    json jt{{"nodeId", t.nodeId}, {"stepLabel", t.stepLabel}};
    if (t.stateTaken) jt["stateTaken"] = *t.stateTaken;
    traj.push_back(std::move(jt));
  }
  j = json{{"rowIndex", r.rowIndex}, {"status", r.success() ? "Success" : "Failed"}, {"trajectory", traj}};
  if (r.failure) {
    j["error"] = {{"code", std::string(to_string(r.failure->code))},
                  {"message", r.failure->message},
                  {"stepPosition", r.failure->stepPosition}};
  }
  if (r.decisionWritten) j["decisionWritten"] = *r.decisionWritten;
  if (r.extractedValue) j["extractedValue"] = *r.extractedValue;
}

void from_json(const json& j, RowResult& r) {
  r = RowResult{};
  r.rowIndex = j.at("rowIndex").get<std::size_t>();
  if (j.contains("error")) {
    const auto& e = j.at("error");
    r.failure = RowFailure{parse_error_code(e.at("code").get<std::string>()), e.value("message", std::string{}),
                           e.value("stepPosition", std::size_t{0})};
  }
  if (j.contains("decisionWritten")) r.decisionWritten = j.at("decisionWritten").get<std::string>();
  if (j.contains("extractedValue")) r.extractedValue = j.at("extractedValue").get<std::string>();
  for (const auto& jt : j.value("trajectory", json::array())) {
    TrajectoryEntry t{jt.at("nodeId").get<std::string>(), jt.at("stepLabel").get<std::string>(), std::nullopt};
    if (jt.contains("stateTaken")) t.stateTaken = jt.at("stateTaken").get<std::string>();
    r.trajectory.push_back(std::move(t));
  }
}

void to_json(json& j, const ValidationReport& r) {
  const auto failed = r.failed_rows();
  j = json{{"startedAt", r.startedAt},
           {"finishedAt", r.finishedAt},
           {"summary", {{"rows", r.rows.size()}, {"succeeded", r.rows.size() - failed}, {"failed", failed}}},
           {"rows", r.rows}};
}

void from_json(const json& j, ValidationReport& r) {
  r = ValidationReport{};
  r.startedAt = j.value("startedAt", std::string{});
  r.finishedAt = j.value("finishedAt", std::string{});
  r.rows = j.at("rows").get<std::vector<RowResult>>();
}

void to_json(json& j, const ProgressEvent& e) {
  j = json{{"rowIndex", e.rowIndex}, {"nodeId", e.nodeId}, {"stepLabel", e.stepLabel}, {"status", e.status}};
}

}  // namespace teachflow::runtime
