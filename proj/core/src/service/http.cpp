// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/service/http.hpp"

#include <exception>
#include <thread>

#include <httplib.h>

#include "teachflow/error.hpp"
#include "teachflow/model/lifecycle.hpp"

namespace teachflow::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code), json{{"error", std::string(to_string(code))}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

// Runs a handler, translating library errors and JSON type errors.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::BadRequest, e.what());
    }
  };
}

json steps_json(const std::vector<model::Step>& steps) {
  json out = json::array();
  for (const auto& s : steps) out.push_back(s);
  return out;
}

// Shared between the streaming callback and the worker thread.
struct ValidationStream {
  runtime::ProgressChannel channel;
  std::thread worker;
  std::optional<runtime::ValidationResult> result;
  std::optional<std::pair<ErrorCode, std::string>> failure;

  ~ValidationStream() {
    if (!worker.joinable()) return;
    // The worker may hold the last reference once the client has gone away.
    if (worker.get_id() == std::this_thread::get_id()) {
      worker.detach();
    } else {
      worker.join();
    }
  }
};

}  // namespace

struct HttpServer::Impl {
  AutomationService& service;
  httplib::Server server;

  explicit Impl(AutomationService& s) : service(s) { routes(); }

  void routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, json{{"status", "ok"}});
    });

    server.Post("/automations", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      if (!body.contains("name") || !body.at("name").is_string()) {
        throw Error(ErrorCode::BadRequest, "name is required");
      }
      const auto rec = service.create(body.at("name").get<std::string>(), body.value("description", std::string{}),
                                      body.value("templateKind", std::string(kTemplateKind)));
      send_json(res, 201, summary_json(rec));
    }));

    server.Get("/automations", guarded([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& r : service.list()) out.push_back(summary_json(r));
      send_json(res, 200, out);
    }));

    server.Get(R"(/automations/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, json(service.get(req.matches[1])));
    }));

    server.Post(R"(/automations/([^/]+)/sample)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  SampleUpload up;
                  up.csv = body.at("csv").get<std::string>();
                  up.decisionValues = body.value("decisionValues", std::vector<std::string>{});
                  up.decisionColumn = opt_field<std::string>(body, "decisionColumn");
                  up.extractionColumn = opt_field<std::string>(body, "extractionColumn");
                  const auto schema = service.upload_sample(req.matches[1], up);
                  const auto rec = service.get(req.matches[1]);
                  send_json(res, 200, json{{"schema", schema}, {"rows", rec.sample->rows.size()}});
                }));

    server.Put(R"(/automations/([^/]+)/app)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      service.set_app(req.matches[1], parse_body(req));
      res.status = 204;
    }));

    server.Post(R"(/automations/([^/]+)/scenarios/([^/]+)/events)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  EventBatch batch;
                  for (const auto& je : body.value("events", json::array())) {
                    batch.events.push_back(je.get<model::ActionEvent>());
                  }
                  batch.snapshots = body.value("snapshots", std::map<std::string, std::string>{});
                  batch.rowIndex = opt_field<std::size_t>(body, "rowIndex");
                  batch.name = opt_field<std::string>(body, "name");
                  const auto fb = service.post_events(req.matches[1], req.matches[2], batch);
                  send_json(res, 200, json{{"steps", steps_json(fb.steps)}, {"appended", steps_json(fb.appended)}});
                }));

    server.Post(R"(/automations/([^/]+)/scenarios/([^/]+)/finish)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  const auto out = service.finish_scenario(req.matches[1], req.matches[2],
                                                           opt_field<std::string>(body, "decision"));
                  json j{{"program", out.program}};
                  if (out.conflict) {
                    j["conflict"] = *out.conflict;
                    send_json(res, 409, j);
                    return;
                  }
                  if (out.coverage) j["coverage"] = *out.coverage;
                  send_json(res, 200, j);
                }));

    server.Delete(R"(/automations/([^/]+)/scenarios/([^/]+))",
                  guarded([this](const httplib::Request& req, httplib::Response& res) {
                    service.delete_scenario(req.matches[1], req.matches[2]);
                    res.status = 204;
                  }));

    server.Get(R"(/automations/([^/]+)/program)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto format = req.has_param("format") ? req.get_param_value("format") : std::string("json");
      if (format == "dot") {
        res.set_content(service.program(req.matches[1], synthesis::MapFormat::Dot), "text/vnd.graphviz");
      } else if (format == "json") {
        res.set_content(service.program(req.matches[1], synthesis::MapFormat::Json), "application/json");
      } else {
        throw Error(ErrorCode::BadRequest, "format must be json or dot");
      }
    }));

    server.Get(R"(/automations/([^/]+)/coverage)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, json(service.coverage(req.matches[1])));
               }));

    server.Get(R"(/automations/([^/]+)/output\.csv)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto rec = service.get(req.matches[1]);
                 if (!rec.lastOutputCsv) throw Error(ErrorCode::NotFound, "no validation has run yet");
                 res.set_content(*rec.lastOutputCsv, "text/csv");
               }));

    server.Post(R"(/automations/([^/]+)/lifecycle)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  const auto state = service.advance(req.matches[1], model::parse_stage(body.at("stage").get<std::string>()));
                  send_json(res, 200, json{{"stage", std::string(model::to_string(state.stage))}});
                }));

    server.Post(R"(/automations/([^/]+)/validate)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  const std::string id = req.matches[1];
                  auto job = std::shared_ptr<ValidationJob>(
                      service.begin_validation(id, opt_field<json>(body, "app")));
                  auto stream = std::make_shared<ValidationStream>();
                  stream->worker = std::thread([stream, job]() mutable {
                    try {
                      stream->result = job->run(stream->channel.observer());
                    } catch (const Error& e) {
                      stream->failure = {e.code(), e.what()};
                    } catch (const std::exception& e) {
                      stream->failure = {ErrorCode::Io, e.what()};
                    }
                    job.reset();
                    stream->channel.close();
                  });
                  res.status = 200;
                  res.set_chunked_content_provider(
                      "application/x-ndjson", [this, stream, id](size_t, httplib::DataSink& sink) {
                        while (auto e = stream->channel.pop()) {
                          json line = *e;
                          line["type"] = "progress";
                          const auto text = line.dump() + "\n";
                          if (!sink.write(text.data(), text.size())) return false;
                        }
                        if (stream->worker.joinable()) stream->worker.join();
                        json last;
                        if (stream->result) {
                          last = json{{"type", "report"},
                                      {"report", stream->result->report},
                                      {"outputCsv", stream->result->outputCsv},
                                      {"stage", std::string(model::to_string(service.get(id).lifecycle.stage))}};
                        } else {
                          last = json{{"type", "error"},
                                      {"error", std::string(to_string(stream->failure->first))},
                                      {"message", stream->failure->second}};
                        }
                        const auto text = last.dump() + "\n";
                        sink.write(text.data(), text.size());
                        sink.done();
                        return true;
                      });
                }));
  }
};

HttpServer::HttpServer(AutomationService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::serve() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::pair<std::string, int> parse_bind_addr(const std::string& addr) {
  if (addr.empty()) return {"127.0.0.1", 8080};
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) return {addr, 8080};
  const auto host = addr.substr(0, colon);
  int port = 8080;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadRequest, "invalid bind address " + addr);
  }
  return {host.empty() ? "0.0.0.0" : host, port};
}

}  // namespace teachflow::service
