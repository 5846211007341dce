// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

namespace teachflow::testing {

/// Local HTTP endpoint that answers detector requests with recorded
/// responses: the first entry whose "whenElementContains" occurs in the
/// posted element HTML wins.
class OracleStub {
 public:
  explicit OracleStub(nlohmann::json recorded, std::string requiredToken = {});
  static std::unique_ptr<OracleStub> from_file(const std::filesystem::path& path, std::string requiredToken = {});
  ~OracleStub();

  OracleStub(const OracleStub&) = delete;
  OracleStub& operator=(const OracleStub&) = delete;

  std::string url() const;
  std::size_t requests() const { return requests_.load(); }
  /// Requests rejected for a missing or wrong bearer token.
  std::size_t unauthorized() const { return unauthorized_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> unauthorized_{0};
};

}  // namespace teachflow::testing
