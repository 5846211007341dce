// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "teachflow/error.hpp"
#include "teachflow/service/http.hpp"

namespace {

teachflow::service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int main() {
  try {
    teachflow::service::ServiceOptions opts;
    opts.dataDir = env_or("DATA_DIR", "teachflow-data");
    opts.oracle = teachflow::semantic::OracleConfig::from_env();
    teachflow::service::AutomationService service(std::move(opts));
    teachflow::service::HttpServer server(service);
    const auto [host, port] = teachflow::service::parse_bind_addr(env_or("BIND_ADDR", "127.0.0.1:8080"));

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "teachflow-server listening on " << host << ":" << port << " (data in "
              << service.store().dir().string() << ")\n";
    if (!server.listen(host, port)) {
      std::cerr << "teachflow-server: cannot bind " << host << ":" << port << "\n";
      return 1;
    }
    return 0;
  } catch (const teachflow::Error& e) {
    std::cerr << "teachflow-server: " << teachflow::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}
