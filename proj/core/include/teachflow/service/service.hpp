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
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/runtime/executor.hpp"
#include "teachflow/semantic/oracle.hpp"
#include "teachflow/service/record.hpp"

namespace teachflow::service {

/// One JSON document per automation, replaced atomically on every write.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path dir);

  void save(const AutomationRecord& record) const;
  /// Throws Io or MalformedProgram for unreadable documents.
  std::vector<AutomationRecord> load_all() const;
  std::filesystem::path path_for(const std::string& id) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct ServiceOptions {
  std::filesystem::path dataDir;
  std::optional<semantic::OracleConfig> oracle;
  runtime::Clock clock;
};

struct SampleUpload {
  std::string csv;
  std::vector<std::string> decisionValues;
  std::optional<std::string> decisionColumn;
  std::optional<std::string> extractionColumn;
};

struct EventBatch {
  std::vector<model::ActionEvent> events;
  std::map<std::string, std::string> snapshots;
  std::optional<std::size_t> rowIndex;
  std::optional<std::string> name;
};

struct EventFeedback {
  std::vector<model::Step> steps;      // whole scenario so far
  std::vector<model::Step> appended;   // tail that changed with this batch
};

struct FinishOutcome {
  std::optional<synthesis::Conflict> conflict;
  synthesis::AutomationProgram program;
  std::optional<synthesis::CoverageReport> coverage;
};

class AutomationService;

namespace detail {
struct Session;
}

/// A claimed validation run: holds the automation's validation slot until
/// destroyed, so concurrent runs on one automation are rejected.
class ValidationJob {
 public:
  ~ValidationJob();
  ValidationJob(const ValidationJob&) = delete;
  ValidationJob& operator=(const ValidationJob&) = delete;

  /// Executes all rows and stores the report on the automation.
  runtime::ValidationResult run(const runtime::ProgressObserver& observer = {});

 private:
  friend class AutomationService;
  ValidationJob(AutomationService& service, std::shared_ptr<detail::Session> session, std::string id,
                synthesis::AutomationProgram program, model::SampleTable table,
                std::shared_ptr<const runtime::SimAppSpec> app);

  AutomationService& service_;
  std::shared_ptr<detail::Session> session_;
  std::string id_;
  synthesis::AutomationProgram program_;
  model::SampleTable table_;
  std::shared_ptr<const runtime::SimAppSpec> app_;
};

/// Session store behind the HTTP routes and the CLI. Mutations on one
/// automation are serialized; reads share a lock; distinct automations
/// proceed independently. Every completed mutation is persisted.
class AutomationService {
 public:
  explicit AutomationService(ServiceOptions options);
  ~AutomationService();

  AutomationRecord create(const std::string& name, const std::string& description,
                          const std::string& templateKind = kTemplateKind);
  std::vector<AutomationRecord> list() const;
  AutomationRecord get(const std::string& id) const;

  model::InputSchema upload_sample(const std::string& id, const SampleUpload& upload);
  void set_app(const std::string& id, const nlohmann::json& appSpec);

  EventFeedback post_events(const std::string& id, const std::string& scenarioId, const EventBatch& batch);
  FinishOutcome finish_scenario(const std::string& id, const std::string& scenarioId,
                                const std::optional<std::string>& decision);
  void delete_scenario(const std::string& id, const std::string& scenarioId);

  std::string program(const std::string& id, synthesis::MapFormat format) const;
  synthesis::CoverageReport coverage(const std::string& id) const;

  /// Checks preconditions (stage, conflicts, app) and claims the run.
  std::unique_ptr<ValidationJob> begin_validation(const std::string& id,
                                                  const std::optional<nlohmann::json>& appSpec = std::nullopt);
  runtime::ValidationResult run_validation(const std::string& id,
                                           const std::optional<nlohmann::json>& appSpec = std::nullopt,
                                           const runtime::ProgressObserver& observer = {});

  model::LifecycleState advance(const std::string& id, model::Stage target);

  const semantic::ObjectDetector& detector() const { return detector_; }
  const RecordStore& store() const { return store_; }

 private:
  friend class ValidationJob;

  std::shared_ptr<detail::Session> session(const std::string& id) const;
  void persist(const AutomationRecord& r) const;
  void complete_validation(const std::string& id, const runtime::ValidationResult& result);

  ServiceOptions options_;
  RecordStore store_;
  semantic::ObjectDetector detector_;
  mutable std::shared_mutex registryMu_;
  std::map<std::string, std::shared_ptr<detail::Session>> sessions_;
};

/// HTTP status for a library error code.
int http_status(ErrorCode code);

}  // namespace teachflow::service
