// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/semantic/oracle.hpp"

#include <cstdlib>

#include <httplib.h>

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::semantic {

std::optional<OracleConfig> OracleConfig::from_env() {
  const char* url = std::getenv("ORACLE_URL");
  if (!url || !*url) return std::nullopt;
  OracleConfig c;
  c.url = url;
  if (const char* tok = std::getenv("ORACLE_TOKEN")) c.token = tok;
  return c;
}

nlohmann::json build_oracle_request(std::string_view elementHtml, const SemanticCatalog& catalog) {
  auto states = nlohmann::json::array();
  for (const auto& e : catalog.entries()) {
    states.push_back({{"type", e.noun}, {"kind", e.kind}, {"states", e.states}});
  }
  return {{"element_html", elementHtml}, {"states_catalog", states}};
}

SemanticObject parse_oracle_response(const nlohmann::json& response,
                                     const SemanticCatalog& catalog) {
  auto field = [&](const char* name) -> std::string {
    if (!response.is_object() || !response.contains(name) || !response.at(name).is_string()) {
      throw Error(ErrorCode::MalformedOracleResponse,
                  std::string("oracle response lacks string field '") + name + "'");
    }
    return response.at(name).get<std::string>();
  };
  auto type = field("type");
  auto name = field("name");
  auto dsl = field("evaluator_dsl");
  if (!response.contains("states_considered") || !response.at("states_considered").is_array()) {
    throw Error(ErrorCode::MalformedOracleResponse, "oracle response lacks states_considered");
  }
  const auto* entry = catalog.find(type);
  if (!entry) {
    throw Error(ErrorCode::MalformedOracleResponse, "oracle returned unknown type '" + type + "'");
  }
  if (text::trim(name).empty()) {
    throw Error(ErrorCode::MalformedOracleResponse, "oracle returned an empty name");
  }
  auto predicate = StatePredicate::parse(dsl);
  validate_predicate(predicate, *entry);

  SemanticObject o;
  o.kind = entry->kind;
  o.friendlyName = text::collapse_ws(name);
  o.objectId = text::slugify(o.friendlyName);
  o.stateNames = entry->states;
  o.predicate = std::move(predicate);
  return o;
}

OracleClient::OracleClient(OracleConfig config) : config_(std::move(config)) {}

SemanticObject OracleClient::oracle_detect(std::string_view elementHtml,
                                           const SemanticCatalog& catalog) const {
  auto schemeEnd = config_.url.find("://");
  auto pathStart = config_.url.find('/', schemeEnd == std::string::npos ? 0 : schemeEnd + 3);
  std::string base = config_.url.substr(0, pathStart);
  std::string path = pathStart == std::string::npos ? "/" : config_.url.substr(pathStart);

  httplib::Client client(base);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.token.empty()) headers.emplace("Authorization", "Bearer " + config_.token);

  auto body = build_oracle_request(elementHtml, catalog).dump();
  auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::OracleUnreachable,
                "oracle at " + config_.url + " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::OracleUnreachable,
                "oracle answered HTTP " + std::to_string(res->status));
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedOracleResponse, std::string("oracle body: ") + e.what());
  }
  return parse_oracle_response(parsed, catalog);
}

ObjectDetector::ObjectDetector(SemanticCatalog catalog, std::shared_ptr<const OracleClient> oracle)
    : catalog_(std::move(catalog)), oracle_(std::move(oracle)) {}

SemanticObject ObjectDetector::detect(const dom::DomSnapshot& snapshot,
                                      std::string_view selectedNodeId) const {
  auto fallback = detect_objects(snapshot, selectedNodeId, catalog_);
  if (!oracle_) return fallback;
  auto anchor = dom::try_resolve(snapshot, fallback.anchorSelector);
  if (!anchor) return fallback;
  try {
    auto o = oracle_->oracle_detect(dom::serialize(snapshot, *anchor), catalog_);
    o.anchorSelector = fallback.anchorSelector;
    o.objectId = fallback.objectId;
    return o;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::OracleUnreachable:
      case ErrorCode::MalformedOracleResponse:
      case ErrorCode::InvalidPredicate:
        return fallback;
      default:
        throw;
    }
  }
}

}  // namespace teachflow::semantic
