// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/error.hpp"
#include "teachflow/model/types.hpp"
#include "teachflow/runtime/simapp.hpp"
#include "teachflow/synthesis/program.hpp"

namespace teachflow::runtime {

struct TrajectoryEntry {
  std::string nodeId;
  std::string stepLabel;
  std::optional<std::string> stateTaken;
  bool operator==(const TrajectoryEntry&) const = default;
};

struct RowFailure {
  ErrorCode code = ErrorCode::ElementNotFound;
  std::string message;
  std::size_t stepPosition = 0;  // index into the trajectory
  bool operator==(const RowFailure&) const = default;
};

struct RowResult {
  std::size_t rowIndex = 0;
  std::optional<RowFailure> failure;  // empty means Success
  std::optional<std::string> decisionWritten;
  std::optional<std::string> extractedValue;
  std::vector<TrajectoryEntry> trajectory;

  bool success() const { return !failure; }
  bool operator==(const RowResult&) const = default;
};

struct ProgressEvent {
  std::size_t rowIndex = 0;
  std::string nodeId;
  std::string stepLabel;
  std::string status;  // "ok" or "failed"
  bool operator==(const ProgressEvent&) const = default;
};

using ProgressObserver = std::function<void(const ProgressEvent&)>;

/// Unbounded FIFO between one producer and any number of consumers.
/// push never blocks, so a slow reader cannot stall execution.
class ProgressChannel {
 public:
  void push(ProgressEvent event);
  void close();
  /// Blocks until an event arrives or the channel is closed and drained.
  std::optional<ProgressEvent> pop();
  std::optional<ProgressEvent> pop_for(std::chrono::milliseconds timeout, bool& closed);
  ProgressObserver observer();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<ProgressEvent> queue_;
  bool closed_ = false;
};

/// Walks the program once against the driver. Errors are caught per row.
RowResult execute_row(const synthesis::AutomationProgram& program, const model::InputSchema& schema,
                      const model::Row& row, std::size_t rowIndex, Driver& driver,
                      const ProgressObserver& observer = {});

struct ValidationReport {
  std::vector<RowResult> rows;
  std::string startedAt;
  std::string finishedAt;

  std::size_t failed_rows() const;
  bool operator==(const ValidationReport&) const = default;
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

struct ValidationOptions {
  ProgressObserver observer;
  Clock clock;  // defaults to the system clock
};

struct ValidationResult {
  ValidationReport report;
  std::string outputCsv;
};

/// Runs every row on a fresh app and writes the output columns.
/// Throws InconsistentProgram when the program is empty or malformed.
ValidationResult validate(const synthesis::AutomationProgram& program, const model::SampleTable& table,
                          std::shared_ptr<const SimAppSpec> app, const ValidationOptions& options = {});

/// Input columns plus decision/extraction columns, rows in report order.
std::string output_csv(const model::SampleTable& table, const ValidationReport& report);

std::string format_timestamp(std::chrono::system_clock::time_point t);

void to_json(nlohmann::json& j, const RowResult& r);
void from_json(const nlohmann::json& j, RowResult& r);
void to_json(nlohmann::json& j, const ValidationReport& r);
void from_json(const nlohmann::json& j, ValidationReport& r);
void to_json(nlohmann::json& j, const ProgressEvent& e);

}  // namespace teachflow::runtime
