// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <cstdint>
#include <cstdio>

#include "commands.hpp"
#include "teachflow/dom/query.hpp"
#include "teachflow/error.hpp"

namespace teachflow::cli {

namespace {

std::string content_ref(const std::string& page, const std::string& html) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : html) {
    h ^= c;
    h *= 16777619u;
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", h);
  return page + "-" + buf;
}

std::string find_unique(const dom::DomSnapshot& snap, const std::string& css) {
  const auto hits = dom::Query::parse(css).select(snap, 0);
  if (hits.size() != 1) {
    throw Error(ErrorCode::ElementNotFound,
                "gesture selector \"" + css + "\" matched " + std::to_string(hits.size()) + " elements");
  }
  return snap.node(hits.front()).nodeId;
}

}  // namespace

Recording record_gestures(const runtime::SimAppSpec& spec, const nlohmann::json& script) {
  runtime::SimApp app(std::make_shared<const runtime::SimAppSpec>(spec));
  Recording rec;
  std::int64_t seq = 0;
  auto capture = [&]() {
    const auto html = app.current().source_html();
    const auto ref = content_ref(app.page(), html);
    rec.snapshots.emplace(ref, html);
    return ref;
  };
  for (const auto& g : script.at("gestures")) {
    model::ActionEvent e;
    e.seq = ++seq;
    e.snapshotRef = capture();
    const auto& snap = app.current();
    if (g.contains("click")) {
      e.kind = model::EventKind::Click;
      e.targetNode = find_unique(snap, g.at("click").get<std::string>());
      rec.events.push_back(e);
      app.click(*e.targetNode);
    } else if (g.contains("type")) {
      e.kind = model::EventKind::Type;
      e.targetNode = find_unique(snap, g.at("type").get<std::string>());
      e.typedValue = g.at("text").get<std::string>();
      rec.events.push_back(e);
      app.type(*e.targetNode, *e.typedValue);
    } else if (g.contains("extract")) {
      e.kind = model::EventKind::Extract;
      e.targetNode = find_unique(snap, g.at("extract").get<std::string>());
      rec.events.push_back(e);
    } else if (g.contains("select")) {
      e.kind = model::EventKind::SelectObject;
      e.targetNode = find_unique(snap, g.at("select").get<std::string>());
      e.objectRef = g.at("object").get<std::string>();
      rec.events.push_back(e);
    } else if (g.contains("assert")) {
      e.kind = model::EventKind::AssertState;
      e.objectRef = g.at("assert").get<std::string>();
      e.stateName = g.at("state").get<std::string>();
      if (g.contains("at")) e.targetNode = find_unique(snap, g.at("at").get<std::string>());
      rec.events.push_back(e);
    } else if (g.contains("decide")) {
      e.kind = model::EventKind::Decide;
      e.decision = g.at("decide").get<std::string>();
      rec.events.push_back(e);
    } else {
      e.kind = model::EventKind::Ignore;
      for (const char* verb : {"focus", "hover", "scroll", "blur", "mousemove"}) {
        if (g.contains(verb)) e.targetNode = find_unique(snap, g.at(verb).get<std::string>());
      }
      if (!e.targetNode) throw Error(ErrorCode::BadRequest, "unknown gesture " + g.dump());
      rec.events.push_back(e);
    }
  }
  std::erase_if(rec.snapshots, [&](const auto& kv) {
    for (const auto& e : rec.events) {
      if (e.snapshotRef == kv.first) return false;
    }
    return true;
  });
  return rec;
}

}  // namespace teachflow::cli
