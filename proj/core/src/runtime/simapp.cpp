// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/runtime/simapp.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "teachflow/dom/query.hpp"
#include "teachflow/error.hpp"
#include "teachflow/runtime/template.hpp"
#include "teachflow/text.hpp"

namespace teachflow::runtime {

using nlohmann::json;

std::string Driver::resolve(const dom::SelectorSpec& selector) const {
  return dom::resolve_selector(current(), selector);
}

std::string Driver::read_text(const std::string& nodeId) const {
  const auto& s = current();
  return text::collapse_ws(s.node(s.index_of(nodeId)).textContent);
}

namespace {

std::string field_key(const dom::Node& n) {
  if (const auto* name = n.attr("name"); name && !name->empty()) return *name;
  if (const auto* id = n.attr("id"); id && !id->empty()) return *id;
  return n.nodeId;
}

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

}  // namespace

SimAppSpec SimAppSpec::from_json(const json& j) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidAppSpec, why); };
  SimAppSpec spec;
  try {
    spec.pages = j.at("pages").get<std::map<std::string, std::string>>();
    if (spec.pages.empty()) fail("no pages");
    spec.initialPage = j.value("initialPage", spec.pages.begin()->first);
    spec.dataset = j.value("dataset", json::array());
    if (!spec.dataset.is_array()) fail("dataset must be an array");
    for (const auto& jt : j.value("transitions", json::array())) {
      Transition t;
      t.from = jt.at("from").get<std::string>();
      const auto on = jt.value("on", std::string("click"));
      if (on == "click") {
        t.on = Transition::Trigger::Click;
      } else if (on == "type") {
        t.on = Transition::Trigger::Type;
      } else {
        fail("unknown trigger " + on);
      }
      t.target = jt.at("target").get<std::string>();
      dom::Query::parse(t.target);
      if (jt.contains("query")) {
        t.queryField = jt.at("query").at("field").get<std::string>();
        t.queryInput = jt.at("query").at("input").get<std::string>();
      }
      if (jt.contains("when")) {
        const auto& w = jt.at("when");
        if (w.contains("records")) {
          const auto r = w.at("records").get<std::string>();
          if (r != "any" && r != "none") fail("when.records must be any or none");
          t.whenRecords = r == "any";
        }
        if (w.contains("input")) {
          t.whenInputKey = w.at("input").at("key").get<std::string>();
          t.whenInputEquals = w.at("input").at("equals").get<std::string>();
        }
      }
      if (jt.contains("select")) {
        t.select = jt.at("select").get<std::string>();
        if (t.select != "first" && t.select != "clicked") fail("select must be first or clicked");
      }
      t.to = jt.at("to").get<std::string>();
      if (!spec.pages.count(t.from)) fail("transition from unknown page " + t.from);
      if (!spec.pages.count(t.to)) fail("transition to unknown page " + t.to);
      spec.transitions.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    fail(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidQuery) fail(e.what());
    throw;
  }
  if (!spec.pages.count(spec.initialPage)) fail("unknown initial page " + spec.initialPage);
  return spec;
}

SimAppSpec SimAppSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(json::parse(buf.str()));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidAppSpec, path.string() + ": " + e.what());
  }
}

json SimAppSpec::to_json() const {
  json ts = json::array();
  for (const auto& t : transitions) {
    json jt{{"from", t.from},
            {"on", t.on == Transition::Trigger::Click ? "click" : "type"},
            {"target", t.target},
            {"to", t.to}};
    if (t.queryField) jt["query"] = {{"field", *t.queryField}, {"input", *t.queryInput}};
    json w = json::object();
    if (t.whenRecords) w["records"] = *t.whenRecords ? "any" : "none";
    if (t.whenInputKey) w["input"] = {{"key", *t.whenInputKey}, {"equals", *t.whenInputEquals}};
    if (!w.empty()) jt["when"] = w;
    if (t.select) jt["select"] = *t.select;
    ts.push_back(std::move(jt));
  }
  return json{{"pages", pages}, {"initialPage", initialPage}, {"dataset", dataset}, {"transitions", ts}};
}

SimApp::SimApp(std::shared_ptr<const SimAppSpec> spec) : spec_(std::move(spec)) { reset(); }

void SimApp::reset() {
  page_ = spec_->initialPage;
  inputs_.clear();
  records_ = json::array();
  selected_ = json();
  renders_ = 0;
  render();
}

void SimApp::render() {
  json ctx{{"inputs", inputs_},
           {"records", records_},
           {"recordCount", records_.size()},
           {"dataset", spec_->dataset}};
  ctx["selected"] = selected_.is_null() ? json::object() : selected_;
  const auto html = render_template(spec_->pages.at(page_), ctx);
  snapshot_ = dom::parse_snapshot(html, page_ + "-" + std::to_string(renders_++));
}

bool SimApp::applies(const Transition& t, Transition::Trigger trigger, dom::NodeIndex node) const {
  if (t.from != page_ || t.on != trigger) return false;
  const auto q = dom::Query::parse(t.target);
  bool hit = false;
  for (auto i = node;; i = *snapshot_.node(i).parent) {
    if (snapshot_.node(i).is_element() && q.matches_node(snapshot_.node(i))) {
      hit = true;
      break;
    }
    if (!snapshot_.node(i).parent) break;
  }
  if (!hit) return false;
  if (t.whenInputKey) {
    auto it = inputs_.find(*t.whenInputKey);
    const std::string have = it == inputs_.end() ? std::string{} : text::trim(it->second);
    if (have != *t.whenInputEquals) return false;
  }
  return true;
}

void SimApp::fire(Transition::Trigger trigger, dom::NodeIndex node) {
  const Transition* chosen = nullptr;
  json records;
  for (const auto& t : spec_->transitions) {
    if (!applies(t, trigger, node)) continue;
    json found = records_;
    if (t.queryField) {
      found = json::array();
      auto it = inputs_.find(*t.queryInput);
      const std::string needle = it == inputs_.end() ? std::string{} : text::trim(it->second);
      for (const auto& r : spec_->dataset) {
        if (r.contains(*t.queryField) && text::trim(cell_text(r.at(*t.queryField))) == needle) found.push_back(r);
      }
    }
    if (t.whenRecords && *t.whenRecords != !found.empty()) continue;
    if (chosen) {
      throw Error(ErrorCode::InvalidAppSpec, "more than one transition applies on page " + page_);
    }
    chosen = &t;
    records = std::move(found);
  }
  if (!chosen) {
    if (trigger == Transition::Trigger::Type) {
      render();
      return;
    }
    throw Error(ErrorCode::TransitionMissing, "nothing happens when clicking " +
                                                  snapshot_.node(node).nodeId + " on page " + page_);
  }
  records_ = std::move(records);
  if (chosen->select == "first") {
    selected_ = records_.empty() ? json() : records_.front();
  } else if (chosen->select == "clicked") {
    selected_ = json();
    for (auto i = node;; i = *snapshot_.node(i).parent) {
      if (const auto* idx = snapshot_.node(i).attr("data-index")) {
        std::size_t k = 0;
        auto [p, ec] = std::from_chars(idx->data(), idx->data() + idx->size(), k);
        if (ec == std::errc{} && p == idx->data() + idx->size() && k < records_.size()) selected_ = records_[k];
        break;
      }
      if (!snapshot_.node(i).parent) break;
    }
  }
  page_ = chosen->to;
  render();
}

void SimApp::click(const std::string& nodeId) { fire(Transition::Trigger::Click, snapshot_.index_of(nodeId)); }

void SimApp::type(const std::string& nodeId, const std::string& value) {
  const auto i = snapshot_.index_of(nodeId);
  inputs_[field_key(snapshot_.node(i))] = value;
  fire(Transition::Trigger::Type, i);
}

}  // namespace teachflow::runtime
