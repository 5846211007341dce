// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <string>

#include "teachflow/service/service.hpp"

namespace teachflow::service {

/// REST facade over an AutomationService. JSON bodies; errors are
/// {"error": <code>, "message": <text>} with a status from http_status().
/// POST /automations/{id}/validate streams line-delimited JSON.
class HttpServer {
 public:
  explicit HttpServer(AutomationService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks until stop(). Returns false when the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); then call serve().
  int bind_any_port(const std::string& host);
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "host:port" from BIND_ADDR-style text; port defaults to 8080.
std::pair<std::string, int> parse_bind_addr(const std::string& addr);

}  // namespace teachflow::service
