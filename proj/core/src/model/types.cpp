// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/model/types.hpp"

#include <algorithm>
#include <set>

#include "teachflow/csv.hpp"
#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::model {

using nlohmann::json;

void InputSchema::validate() const {
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (text::trim(c).empty()) throw Error(ErrorCode::InvalidSchema, "empty column name");
    if (!seen.insert(c).second) throw Error(ErrorCode::DuplicateColumn, "duplicate column: " + c);
  }
  if (targetDecisionColumn) {
    if (targetDecisionColumn->empty()) {
      throw Error(ErrorCode::InvalidSchema, "empty decision column name");
    }
    if (seen.count(*targetDecisionColumn)) {
      throw Error(ErrorCode::InvalidSchema,
                  "decision column is also an input column: " + *targetDecisionColumn);
    }
    if (decisionValues.empty()) {
      throw Error(ErrorCode::InvalidSchema, "decision column set without decision values");
    }
  }
  if (targetExtractionColumn) {
    if (targetExtractionColumn->empty()) {
      throw Error(ErrorCode::InvalidSchema, "empty extraction column name");
    }
    if (seen.count(*targetExtractionColumn)) {
      throw Error(ErrorCode::InvalidSchema,
                  "extraction column is also an input column: " + *targetExtractionColumn);
    }
    if (targetDecisionColumn == targetExtractionColumn) {
      throw Error(ErrorCode::InvalidSchema, "decision and extraction columns coincide");
    }
  }
  std::set<std::string> values;
  for (const auto& v : decisionValues) {
    if (v.empty()) throw Error(ErrorCode::InvalidSchema, "empty decision value");
    if (!values.insert(v).second) throw Error(ErrorCode::InvalidSchema, "duplicate decision value: " + v);
  }
}

bool InputSchema::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

bool InputSchema::allows_decision(std::string_view value) const {
  return std::find(decisionValues.begin(), decisionValues.end(), value) != decisionValues.end();
}

std::vector<std::string> InputSchema::output_header() const {
  auto out = columns;
  if (targetDecisionColumn) out.push_back(*targetDecisionColumn);
  if (targetExtractionColumn) out.push_back(*targetExtractionColumn);
  return out;
}

SampleTable load_sample_table(std::string_view csvBytes, std::vector<std::string> decisionValues,
                              std::optional<std::string> decisionColumn,
                              std::optional<std::string> extractionColumn) {
  auto records = csv::parse(csvBytes);
  std::erase_if(records, [](const csv::Record& r) { return r.size() == 1 && r[0].empty(); });
  if (records.empty()) throw Error(ErrorCode::MalformedCsv, "missing header row");

  SampleTable table;
  table.schema.columns = records.front();
  table.schema.decisionValues = std::move(decisionValues);
  table.schema.targetDecisionColumn = std::move(decisionColumn);
  table.schema.targetExtractionColumn = std::move(extractionColumn);
  table.schema.validate();

  const auto width = table.schema.columns.size();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw Error(ErrorCode::MalformedCsv, "record " + std::to_string(r + 1) + " has " +
                                               std::to_string(records[r].size()) + " fields, expected " +
                                               std::to_string(width));
    }
    Row row;
    for (std::size_t c = 0; c < width; ++c) row[table.schema.columns[c]] = records[r][c];
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw Error(ErrorCode::EmptyTable, "table has a header but no rows");
  return table;
}

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::Click, "Click"},
    {EventKind::Type, "Type"},
    {EventKind::Extract, "Extract"},
    {EventKind::SelectObject, "SelectObject"},
    {EventKind::AssertState, "AssertState"},
    {EventKind::Decide, "Decide"},
    {EventKind::Ignore, "Ignore"},
};

constexpr std::string_view kIgnoredDomEvents[] = {"focus", "blur", "scroll", "hover", "mousemove"};

constexpr std::pair<StepKind, std::string_view> kStepNames[] = {
    {StepKind::Click, "Click"},
    {StepKind::Type, "Type"},
    {StepKind::Extract, "Extract"},
    {StepKind::SelectObject, "SelectObject"},
    {StepKind::AssertState, "AssertState"},
    {StepKind::Decide, "Decide"},
};

void kind_error(const ActionEvent& e, const std::string& what) {
  throw Error(ErrorCode::KindFieldMismatch,
              "event " + std::to_string(e.seq) + " (" + std::string(to_string(e.kind)) + "): " + what);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, n] : kEventNames) {
    if (k == kind) return n;
  }
  return "Ignore";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kEventNames) {
    if (n == name) return k;
  }
  for (auto n : kIgnoredDomEvents) {
    if (n == name) return EventKind::Ignore;
  }
  return std::nullopt;
}

void check_event_fields(const ActionEvent& e) {
  auto need = [&](const std::optional<std::string>& f, const char* name) {
    if (!f) kind_error(e, std::string("missing ") + name);
  };
  auto forbid = [&](const std::optional<std::string>& f, const char* name) {
    if (f) kind_error(e, std::string("unexpected ") + name);
  };
  switch (e.kind) {
    case EventKind::Click:
    case EventKind::Extract:
      need(e.targetNode, "targetNode");
      forbid(e.typedValue, "typedValue");
      forbid(e.objectRef, "objectRef");
      forbid(e.stateName, "stateName");
      forbid(e.decision, "decision");
      break;
    case EventKind::Type:
      need(e.targetNode, "targetNode");
      need(e.typedValue, "typedValue");
      forbid(e.objectRef, "objectRef");
      forbid(e.stateName, "stateName");
      forbid(e.decision, "decision");
      break;
    case EventKind::SelectObject:
      need(e.targetNode, "targetNode");
      need(e.objectRef, "objectRef");
      forbid(e.typedValue, "typedValue");
      forbid(e.stateName, "stateName");
      forbid(e.decision, "decision");
      break;
    case EventKind::AssertState:
      need(e.objectRef, "objectRef");
      need(e.stateName, "stateName");
      forbid(e.typedValue, "typedValue");
      forbid(e.decision, "decision");
      break;
    case EventKind::Decide:
      need(e.decision, "decision");
      forbid(e.targetNode, "targetNode");
      forbid(e.typedValue, "typedValue");
      forbid(e.objectRef, "objectRef");
      forbid(e.stateName, "stateName");
      break;
    case EventKind::Ignore:
      forbid(e.typedValue, "typedValue");
      forbid(e.objectRef, "objectRef");
      forbid(e.stateName, "stateName");
      forbid(e.decision, "decision");
      break;
  }
}

std::vector<ActionEvent> parse_trace(std::string_view jsonl) {
  std::vector<ActionEvent> out;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    auto end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    auto line = text::trim(jsonl.substr(pos, end - pos));
    ++lineNo;
    pos = end + 1;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(lineNo) + ": " + ex.what());
    }
    try {
      out.push_back(j.get<ActionEvent>());
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(lineNo) + ": " + ex.what());
    }
  }
  return out;
}

std::string write_trace(const std::vector<ActionEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += json(e).dump();
    out += '\n';
  }
  return out;
}

std::string describe(const ParameterBinding& b) {
  if (const auto* c = std::get_if<ColumnRef>(&b)) return "column " + c->column;
  return "\"" + std::get<Literal>(b).text + "\"";
}

std::string_view to_string(StepKind kind) {
  for (const auto& [k, n] : kStepNames) {
    if (k == kind) return n;
  }
  return "Click";
}

StepKind parse_step_kind(std::string_view name) {
  for (const auto& [k, n] : kStepNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::MalformedProgram, "unknown step kind: " + std::string(name));
}

StateGuard StateGuard::parse(std::string_view t) {
  auto s = text::trim(t);
  if (s.size() > 4 && s.compare(0, 4, "not ") == 0) return {text::trim(s.substr(4)), true};
  return {s, false};
}

std::string StateGuard::to_string() const { return negated ? "not " + state : state; }

bool StateGuard::admits(std::string_view actual) const { return (actual == state) != negated; }

Scenario make_scenario(std::string id, std::string name, std::vector<Step> steps,
                       std::size_t sampleRowIndex, const InputSchema& schema) {
  if (steps.empty()) throw Error(ErrorCode::InvalidScenario, "scenario has no steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.label.empty()) {
      throw Error(ErrorCode::InvalidScenario, "step " + std::to_string(i) + " has an empty label");
    }
    if (s.kind == StepKind::Decide) {
      if (!schema.targetDecisionColumn) {
        throw Error(ErrorCode::InvalidScenario, "decision recorded but the schema has no decision column");
      }
      if (i + 1 != steps.size()) {
        throw Error(ErrorCode::InvalidScenario, "decision at step " + std::to_string(i) + " is not last");
      }
      if (!s.decision || !schema.allows_decision(*s.decision)) {
        throw Error(ErrorCode::InvalidScenario, "decision is not one of the defined values");
      }
    }
    if (s.kind == StepKind::Extract && s.extractionTarget != schema.targetExtractionColumn) {
      throw Error(ErrorCode::InvalidScenario, "extract step does not target the extraction column");
    }
    if (s.kind == StepKind::Type && s.binding) {
      if (const auto* c = std::get_if<ColumnRef>(&*s.binding); c && !schema.has_column(c->column)) {
        throw Error(ErrorCode::InvalidScenario, "binding names unknown column " + c->column);
      }
    }
  }
  if (schema.targetDecisionColumn && steps.back().kind != StepKind::Decide) {
    throw Error(ErrorCode::InvalidScenario, "scenario must end with a decision");
  }
  return Scenario{std::move(id), std::move(name), std::move(steps), sampleRowIndex};
}

const Step* decide_step(const Scenario& s) {
  if (!s.steps.empty() && s.steps.back().kind == StepKind::Decide) return &s.steps.back();
  return nullptr;
}

namespace {

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void get_opt(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

}  // namespace

void to_json(json& j, const InputSchema& s) {
  j = json{{"columns", s.columns}, {"decisionValues", s.decisionValues}};
  put_opt(j, "targetDecisionColumn", s.targetDecisionColumn);
  put_opt(j, "targetExtractionColumn", s.targetExtractionColumn);
}

void from_json(const json& j, InputSchema& s) {
  s.columns = j.at("columns").get<std::vector<std::string>>();
  s.decisionValues = j.value("decisionValues", std::vector<std::string>{});
  get_opt(j, "targetDecisionColumn", s.targetDecisionColumn);
  get_opt(j, "targetExtractionColumn", s.targetExtractionColumn);
}

void to_json(json& j, const SampleTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json cells = json::array();
    for (const auto& c : t.schema.columns) {
      auto it = r.find(c);
      cells.push_back(it == r.end() ? std::string{} : it->second);
    }
    rows.push_back(std::move(cells));
  }
  j = json{{"schema", t.schema}, {"rows", std::move(rows)}};
}

void from_json(const json& j, SampleTable& t) {
  t.schema = j.at("schema").get<InputSchema>();
  t.rows.clear();
  for (const auto& cells : j.at("rows")) {
    if (cells.size() != t.schema.columns.size()) {
      throw Error(ErrorCode::MalformedCsv, "stored row width does not match schema");
    }
    Row r;
    for (std::size_t c = 0; c < cells.size(); ++c) r[t.schema.columns[c]] = cells[c].get<std::string>();
    t.rows.push_back(std::move(r));
  }
}

void to_json(json& j, const ActionEvent& e) {
  j = json{{"seq", e.seq}, {"kind", std::string(to_string(e.kind))}, {"snapshotRef", e.snapshotRef}};
  put_opt(j, "targetNode", e.targetNode);
  put_opt(j, "typedValue", e.typedValue);
  put_opt(j, "objectRef", e.objectRef);
  put_opt(j, "stateName", e.stateName);
  put_opt(j, "decision", e.decision);
}

void from_json(const json& j, ActionEvent& e) {
  static const std::set<std::string> kKnown = {"seq",       "kind",       "snapshotRef", "targetNode",
                                               "typedValue", "objectRef", "stateName",   "decision"};
  if (!j.is_object()) throw Error(ErrorCode::MalformedTrace, "event is not an object");
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.count(k)) throw Error(ErrorCode::MalformedTrace, "unknown event field: " + k);
  }
  e.seq = j.at("seq").get<std::int64_t>();
  const auto kindName = j.at("kind").get<std::string>();
  const auto kind = parse_event_kind(kindName);
  if (!kind) throw Error(ErrorCode::MalformedTrace, "unknown event kind: " + kindName);
  e.kind = *kind;
  e.snapshotRef = j.value("snapshotRef", std::string{});
  get_opt(j, "targetNode", e.targetNode);
  get_opt(j, "typedValue", e.typedValue);
  get_opt(j, "objectRef", e.objectRef);
  get_opt(j, "stateName", e.stateName);
  get_opt(j, "decision", e.decision);
  check_event_fields(e);
}

void to_json(json& j, const ParameterBinding& b) {
  if (const auto* c = std::get_if<ColumnRef>(&b)) {
    j = json{{"columnRef", c->column}};
  } else {
    j = json{{"literal", std::get<Literal>(b).text}};
  }
}

void from_json(const json& j, ParameterBinding& b) {
  if (j.contains("columnRef")) {
    b = ColumnRef{j.at("columnRef").get<std::string>()};
  } else if (j.contains("literal")) {
    b = Literal{j.at("literal").get<std::string>()};
  } else {
    throw Error(ErrorCode::MalformedProgram, "unknown binding: " + j.dump());
  }
}

void to_json(json& j, const Step& s) {
  j = json{{"kind", std::string(to_string(s.kind))}, {"label", s.label}, {"snapshotRef", s.snapshotRef}};
  put_opt(j, "selector", s.selector);
  put_opt(j, "binding", s.binding);
  put_opt(j, "demonstratedValue", s.demonstratedValue);
  put_opt(j, "extractionTarget", s.extractionTarget);
  put_opt(j, "objectRef", s.objectRef);
  put_opt(j, "stateName", s.stateName);
  put_opt(j, "object", s.object);
  put_opt(j, "decision", s.decision);
}

void from_json(const json& j, Step& s) {
  s.kind = parse_step_kind(j.at("kind").get<std::string>());
  s.label = j.at("label").get<std::string>();
  s.snapshotRef = j.value("snapshotRef", std::string{});
  get_opt(j, "selector", s.selector);
  get_opt(j, "binding", s.binding);
  get_opt(j, "demonstratedValue", s.demonstratedValue);
  get_opt(j, "extractionTarget", s.extractionTarget);
  get_opt(j, "objectRef", s.objectRef);
  get_opt(j, "stateName", s.stateName);
  get_opt(j, "object", s.object);
  get_opt(j, "decision", s.decision);
}

void to_json(json& j, const Scenario& s) {
  j = json{{"id", s.id}, {"name", s.name}, {"steps", s.steps}, {"sampleRowIndex", s.sampleRowIndex}};
}

void from_json(const json& j, Scenario& s) {
  s.id = j.at("id").get<std::string>();
  s.name = j.value("name", s.id);
  s.steps = j.at("steps").get<std::vector<Step>>();
  s.sampleRowIndex = j.value("sampleRowIndex", std::size_t{0});
}

}  // namespace teachflow::model
