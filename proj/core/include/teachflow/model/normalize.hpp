// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "teachflow/dom/snapshot.hpp"
#include "teachflow/model/types.hpp"
#include "teachflow/semantic/oracle.hpp"

namespace teachflow::model {

/// Snapshots referenced by a trace, keyed by snapshotRef.
class SnapshotStore {
 public:
  /// Parses and stores `html` under `ref`, replacing any previous entry.
  void add(const std::string& ref, std::string_view html);
  void add(const std::string& ref, std::shared_ptr<const dom::DomSnapshot> snapshot);
  /// Throws DanglingSnapshotRef.
  const dom::DomSnapshot& get(std::string_view ref) const;
  bool contains(std::string_view ref) const;
  std::vector<std::string> refs() const;
  std::size_t size() const { return snapshots_.size(); }

  /// Every `<ref>.html` file in `dir`. Throws Io.
  static SnapshotStore load_directory(const std::filesystem::path& dir);

 private:
  std::map<std::string, std::shared_ptr<const dom::DomSnapshot>, std::less<>> snapshots_;
};

/// Turns raw recorded events into labeled steps. Ignore events are dropped,
/// runs of Type events on one target collapse into the final value, and a
/// SelectObject immediately followed by an AssertState on the same object
/// folds into that AssertState.
/// Throws DanglingSnapshotRef, KindFieldMismatch, MalformedTrace, UnknownNode.
std::vector<Step> normalize_events(const std::vector<ActionEvent>& events, const SnapshotStore& snapshots,
                                   const InputSchema& schema, const Row& row,
                                   const semantic::ObjectDetector& detector);

std::vector<Step> normalize_events(const std::vector<ActionEvent>& events, const SnapshotStore& snapshots,
                                   const InputSchema& schema, const Row& row);

/// The events that reproduce `steps` when normalized again: targets are
/// re-resolved on each step's own snapshot.
std::vector<ActionEvent> events_from_steps(const std::vector<Step>& steps, const SnapshotStore& snapshots);

}  // namespace teachflow::model
