// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "teachflow/semantic/detector.hpp"

namespace teachflow::semantic {

/// Endpoint of an external detector (typically an LLM behind a thin
/// adapter). Read from ORACLE_URL / ORACLE_TOKEN; unset URL disables it.
struct OracleConfig {
  std::string url;  // http://host:port/path
  std::string token;
  std::chrono::milliseconds timeout{5000};

  static std::optional<OracleConfig> from_env();
};

/// {element_html, states_catalog}
nlohmann::json build_oracle_request(std::string_view elementHtml, const SemanticCatalog& catalog);

/// Parses {type, name, states_considered, evaluator_dsl}. The evaluator is
/// validated against the predicate grammar and the kind's state set before
/// it is accepted. Leaves objectId and anchorSelector empty.
/// Throws MalformedOracleResponse or InvalidPredicate.
SemanticObject parse_oracle_response(const nlohmann::json& response,
                                     const SemanticCatalog& catalog);

/// Blocking client; each call owns its connection so one instance can be
/// shared across sessions.
class OracleClient {
 public:
  explicit OracleClient(OracleConfig config);

  /// Throws OracleUnreachable, MalformedOracleResponse, InvalidPredicate.
  SemanticObject oracle_detect(std::string_view elementHtml, const SemanticCatalog& catalog) const;

  const OracleConfig& config() const { return config_; }

 private:
  OracleConfig config_;
};

/// Detection with an optional oracle in front of the rule-based detector.
/// Any oracle failure falls back to the rules; the reason is kept.
class ObjectDetector {
 public:
  explicit ObjectDetector(SemanticCatalog catalog = SemanticCatalog::builtin(),
                          std::shared_ptr<const OracleClient> oracle = nullptr);

  SemanticObject detect(const dom::DomSnapshot& snapshot, std::string_view selectedNodeId) const;

  const SemanticCatalog& catalog() const { return catalog_; }
  bool has_oracle() const { return oracle_ != nullptr; }

 private:
  SemanticCatalog catalog_;
  std::shared_ptr<const OracleClient> oracle_;
};

}  // namespace teachflow::semantic
