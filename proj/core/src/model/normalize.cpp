// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/model/normalize.hpp"

#include <fstream>
#include <sstream>

#include "teachflow/dom/label.hpp"
#include "teachflow/dom/selector.hpp"
#include "teachflow/error.hpp"
#include "teachflow/params/binding.hpp"

namespace teachflow::model {

void SnapshotStore::add(const std::string& ref, std::string_view html) {
  snapshots_[ref] = std::make_shared<const dom::DomSnapshot>(dom::parse_snapshot(html, ref));
}

void SnapshotStore::add(const std::string& ref, std::shared_ptr<const dom::DomSnapshot> snapshot) {
  snapshots_[ref] = std::move(snapshot);
}

const dom::DomSnapshot& SnapshotStore::get(std::string_view ref) const {
  auto it = snapshots_.find(ref);
  if (it == snapshots_.end()) {
    throw Error(ErrorCode::DanglingSnapshotRef, "no snapshot named " + std::string(ref));
  }
  return *it->second;
}

bool SnapshotStore::contains(std::string_view ref) const { return snapshots_.find(ref) != snapshots_.end(); }

std::vector<std::string> SnapshotStore::refs() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : snapshots_) out.push_back(k);
  return out;
}

SnapshotStore SnapshotStore::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::Io, "snapshot directory not found: " + dir.string());
  }
  SnapshotStore store;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".html") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + entry.path().string());
    std::ostringstream buf;
    buf << in.rdbuf();
    store.add(entry.path().stem().string(), buf.str());
  }
  return store;
}

namespace {

class Normalizer {
 public:
  Normalizer(const SnapshotStore& snapshots, const InputSchema& schema, const Row& row,
             const semantic::ObjectDetector& detector)
      : snapshots_(snapshots), schema_(schema), row_(row), detector_(detector) {}

  std::vector<Step> run(const std::vector<ActionEvent>& raw) {
    std::vector<const ActionEvent*> events;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (i > 0 && raw[i].seq <= raw[i - 1].seq) {
        throw Error(ErrorCode::MalformedTrace,
                    "event seq " + std::to_string(raw[i].seq) + " does not increase");
      }
      check_event_fields(raw[i]);
      if (raw[i].kind != EventKind::Ignore) events.push_back(&raw[i]);
    }

    std::vector<Step> steps;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = *events[i];
      const auto& snap = snapshots_.get(e.snapshotRef);
      switch (e.kind) {
        case EventKind::Click:
          steps.push_back(element_step(StepKind::Click, e, snap));
          break;
        case EventKind::Type: {
          std::size_t last = i;
          while (last + 1 < events.size() && events[last + 1]->kind == EventKind::Type &&
                 events[last + 1]->targetNode == e.targetNode) {
            ++last;
          }
          const auto& fin = *events[last];
          auto step = element_step(StepKind::Type, fin, snapshots_.get(fin.snapshotRef));
          step.binding = params::map_value(*fin.typedValue, params::BindingContext{schema_, row_});
          step.demonstratedValue = *fin.typedValue;
          steps.push_back(std::move(step));
          i = last;
          break;
        }
        case EventKind::Extract: {
          if (!schema_.targetExtractionColumn) {
            throw Error(ErrorCode::KindFieldMismatch,
                        "event " + std::to_string(e.seq) + ": extraction without an extraction column");
          }
          auto step = element_step(StepKind::Extract, e, snap);
          step.extractionTarget = schema_.targetExtractionColumn;
          steps.push_back(std::move(step));
          break;
        }
        case EventKind::SelectObject: {
          auto object = detect(snap, *e.targetNode, *e.objectRef);
          objects_[*e.objectRef] = object;
          const bool folded = i + 1 < events.size() && events[i + 1]->kind == EventKind::AssertState &&
                              events[i + 1]->objectRef == e.objectRef;
          if (!folded) {
            Step step;
            step.kind = StepKind::SelectObject;
            step.selector = object.anchorSelector;
            step.label = object.friendlyName;
            step.objectRef = e.objectRef;
            step.object = std::move(object);
            step.snapshotRef = e.snapshotRef;
            steps.push_back(std::move(step));
          }
          break;
        }
        case EventKind::AssertState:
          steps.push_back(assert_step(e, snap));
          break;
        case EventKind::Decide: {
          if (!schema_.allows_decision(*e.decision)) {
            throw Error(ErrorCode::KindFieldMismatch,
                        "event " + std::to_string(e.seq) + ": \"" + *e.decision + "\" is not a decision value");
          }
          Step step;
          step.kind = StepKind::Decide;
          step.label = *e.decision;
          step.decision = e.decision;
          step.snapshotRef = e.snapshotRef;
          steps.push_back(std::move(step));
          break;
        }
        case EventKind::Ignore:
          break;
      }
    }
    return steps;
  }

 private:
  Step element_step(StepKind kind, const ActionEvent& e, const dom::DomSnapshot& snap) const {
    Step step;
    step.kind = kind;
    step.selector = dom::generate_selector(snap, *e.targetNode);
    step.label = dom::associate_label(snap, *e.targetNode);
    step.snapshotRef = e.snapshotRef;
    return step;
  }

  semantic::SemanticObject detect(const dom::DomSnapshot& snap, const std::string& nodeId,
                                  const std::string& objectRef) const {
    auto object = detector_.detect(snap, nodeId);
    object.objectId = objectRef;
    return object;
  }

  Step assert_step(const ActionEvent& e, const dom::DomSnapshot& snap) {
    semantic::SemanticObject object;
    if (e.targetNode) {
      object = detect(snap, *e.targetNode, *e.objectRef);
      objects_[*e.objectRef] = object;
    } else if (auto it = objects_.find(*e.objectRef); it != objects_.end()) {
      object = it->second;
    } else {
      throw Error(ErrorCode::KindFieldMismatch,
                  "event " + std::to_string(e.seq) + ": condition on unselected object " + *e.objectRef);
    }
    const auto guard = StateGuard::parse(*e.stateName);
    if (std::find(object.stateNames.begin(), object.stateNames.end(), guard.state) == object.stateNames.end()) {
      throw Error(ErrorCode::KindFieldMismatch, "event " + std::to_string(e.seq) + ": \"" + guard.state +
                                                    "\" is not a state of " + object.friendlyName);
    }
    Step step;
    step.kind = StepKind::AssertState;
    step.selector = object.anchorSelector;
    step.label = object.friendlyName;
    step.objectRef = e.objectRef;
    step.stateName = guard.to_string();
    step.object = std::move(object);
    step.snapshotRef = e.snapshotRef;
    return step;
  }

  const SnapshotStore& snapshots_;
  const InputSchema& schema_;
  const Row& row_;
  const semantic::ObjectDetector& detector_;
  std::map<std::string, semantic::SemanticObject> objects_;
};

}  // namespace

std::vector<Step> normalize_events(const std::vector<ActionEvent>& events, const SnapshotStore& snapshots,
                                   const InputSchema& schema, const Row& row,
                                   const semantic::ObjectDetector& detector) {
  return Normalizer(snapshots, schema, row, detector).run(events);
}

std::vector<Step> normalize_events(const std::vector<ActionEvent>& events, const SnapshotStore& snapshots,
                                   const InputSchema& schema, const Row& row) {
  static const semantic::ObjectDetector kRules;
  return normalize_events(events, snapshots, schema, row, kRules);
}

std::vector<ActionEvent> events_from_steps(const std::vector<Step>& steps, const SnapshotStore& snapshots) {
  std::vector<ActionEvent> out;
  std::int64_t seq = 1;
  for (const auto& s : steps) {
    ActionEvent e;
    e.seq = seq++;
    e.snapshotRef = s.snapshotRef;
    if (s.selector && s.kind != StepKind::Decide) {
      e.targetNode = dom::resolve_selector(snapshots.get(s.snapshotRef), *s.selector);
    }
    switch (s.kind) {
      case StepKind::Click: e.kind = EventKind::Click; break;
      case StepKind::Type:
        e.kind = EventKind::Type;
        e.typedValue = s.demonstratedValue.value_or(s.binding && std::holds_alternative<Literal>(*s.binding)
                                                        ? std::get<Literal>(*s.binding).text
                                                        : std::string{});
        break;
      case StepKind::Extract: e.kind = EventKind::Extract; break;
      case StepKind::SelectObject:
        e.kind = EventKind::SelectObject;
        e.objectRef = s.objectRef;
        break;
      case StepKind::AssertState:
        e.kind = EventKind::AssertState;
        e.objectRef = s.objectRef;
        e.stateName = s.stateName;
        break;
      case StepKind::Decide:
        e.kind = EventKind::Decide;
        e.decision = s.decision;
        break;
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace teachflow::model
