// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/synthesis/program.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "teachflow/error.hpp"

namespace teachflow::synthesis {

using nlohmann::json;

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Linear: return "Linear";
    case NodeKind::Branch: return "Branch";
    case NodeKind::Leaf: return "Leaf";
    case NodeKind::ExtractLeaf: return "ExtractLeaf";
  }
  return "Linear";
}

std::string_view to_string(Conflict::Kind kind) {
  switch (kind) {
    case Conflict::Kind::DivergenceWithoutCondition: return "DivergenceWithoutCondition";
    case Conflict::Kind::StepMismatch: return "StepMismatch";
    case Conflict::Kind::DuplicateArm: return "DuplicateArm";
    case Conflict::Kind::DecisionContradiction: return "DecisionContradiction";
  }
  return "StepMismatch";
}

bool ElseArm::admits(std::string_view state) const {
  return std::find(excluded.begin(), excluded.end(), state) == excluded.end();
}

const StepNode& AutomationProgram::node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return n;
  }
  throw Error(ErrorCode::UnknownNode, "no program node " + std::string(id));
}

StepNode& AutomationProgram::node(std::string_view id) {
  return const_cast<StepNode&>(std::as_const(*this).node(id));
}

std::vector<std::string> AutomationProgram::preorder() const {
  std::vector<std::string> out;
  if (empty()) return out;
  std::set<std::string> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (!seen.insert(id).second) return;
    out.push_back(id);
    const auto& n = node(id);
    if (n.kind == NodeKind::Linear) {
      visit(n.next);
    } else if (n.kind == NodeKind::Branch) {
      for (const auto& [state, next] : n.arms) visit(next);
      if (n.elseArm) visit(n.elseArm->next);
    }
  };
  visit(entry);
  return out;
}

void check_program(const AutomationProgram& p, const model::InputSchema* schema) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::MalformedProgram, why); };
  if (p.nodes.empty()) {
    if (!p.entry.empty()) fail("empty program with an entry");
    return;
  }
  std::map<std::string, const StepNode*> byId;
  for (const auto& n : p.nodes) {
    if (n.id.empty()) fail("node without id");
    if (!byId.emplace(n.id, &n).second) fail("duplicate node id " + n.id);
  }
  std::map<std::string, int> visits;
  std::vector<std::string> stack{p.entry};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    auto it = byId.find(id);
    if (it == byId.end()) fail("reference to missing node " + id);
    if (++visits[id] > 1) fail("node " + id + " has more than one parent");
    const auto& n = *it->second;
    switch (n.kind) {
      case NodeKind::Linear:
        if (!n.step) fail("linear node " + id + " without a step");
        if (n.step->kind == model::StepKind::AssertState || n.step->kind == model::StepKind::Decide) {
          fail("linear node " + id + " holds a condition or decision");
        }
        stack.push_back(n.next);
        break;
      case NodeKind::Branch:
        if (n.arms.empty() && !n.elseArm) fail("branch " + id + " has no arms");
        for (const auto& [state, next] : n.arms) stack.push_back(next);
        if (n.elseArm) stack.push_back(n.elseArm->next);
        break;
      case NodeKind::Leaf:
        if (!n.decision) fail("leaf " + id + " without a decision");
        if (schema && !schema->allows_decision(*n.decision)) {
          fail("leaf decision \"" + *n.decision + "\" is not a schema decision value");
        }
        break;
      case NodeKind::ExtractLeaf:
        break;
    }
  }
  if (visits.size() != p.nodes.size()) fail("program has unreachable nodes");
}

namespace {

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

NodeKind parse_node_kind(const std::string& s) {
  for (auto k : {NodeKind::Linear, NodeKind::Branch, NodeKind::Leaf, NodeKind::ExtractLeaf}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::MalformedProgram, "unknown node kind: " + s);
}

Conflict::Kind parse_conflict_kind(const std::string& s) {
  for (auto k : {Conflict::Kind::DivergenceWithoutCondition, Conflict::Kind::StepMismatch,
                 Conflict::Kind::DuplicateArm, Conflict::Kind::DecisionContradiction}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::MalformedProgram, "unknown conflict kind: " + s);
}

void to_json(json& j, const StepNode& n) {
  j = json{{"id", n.id}, {"kind", std::string(to_string(n.kind))}};
  switch (n.kind) {
    case NodeKind::Linear:
      j["step"] = *n.step;
      j["next"] = n.next;
      break;
    case NodeKind::Branch: {
      j["objectRef"] = n.objectRef;
      j["label"] = n.label;
      put_opt(j, "object", n.object);
      j["arms"] = n.arms;
      if (n.elseArm) j["else"] = json{{"excluded", n.elseArm->excluded}, {"next", n.elseArm->next}};
      break;
    }
    case NodeKind::Leaf:
      j["decision"] = *n.decision;
      break;
    case NodeKind::ExtractLeaf:
      break;
  }
}

void from_json(const json& j, StepNode& n) {
  n = StepNode{};
  n.id = j.at("id").get<std::string>();
  n.kind = parse_node_kind(j.at("kind").get<std::string>());
  switch (n.kind) {
    case NodeKind::Linear:
      n.step = j.at("step").get<model::Step>();
      n.next = j.at("next").get<std::string>();
      break;
    case NodeKind::Branch:
      n.objectRef = j.at("objectRef").get<std::string>();
      n.label = j.at("label").get<std::string>();
      if (j.contains("object")) n.object = j.at("object").get<semantic::SemanticObject>();
      n.arms = j.value("arms", std::map<std::string, std::string>{});
      if (j.contains("else")) {
        const auto& e = j.at("else");
        n.elseArm = ElseArm{e.value("excluded", std::vector<std::string>{}), e.at("next").get<std::string>()};
      }
      break;
    case NodeKind::Leaf:
      n.decision = j.at("decision").get<std::string>();
      break;
    case NodeKind::ExtractLeaf:
      break;
  }
}

}  // namespace

void to_json(json& j, const AutomationProgram& p) {
  json nodes = json::array();
  for (const auto& n : p.nodes) {
    json jn;
    to_json(jn, n);
    nodes.push_back(std::move(jn));
  }
  j = json{{"formatVersion", 1},
           {"entry", p.entry},
           {"contributingScenarios", p.contributingScenarios},
           {"nodes", std::move(nodes)}};
}

void from_json(const json& j, AutomationProgram& p) {
  if (j.value("formatVersion", 0) != 1) throw Error(ErrorCode::MalformedProgram, "unsupported formatVersion");
  p = AutomationProgram{};
  p.entry = j.at("entry").get<std::string>();
  p.contributingScenarios = j.value("contributingScenarios", std::vector<std::string>{});
  for (const auto& jn : j.at("nodes")) {
    StepNode n;
    from_json(jn, n);
    p.nodes.push_back(std::move(n));
  }
}

void to_json(json& j, const Conflict& c) {
  j = json{{"kind", std::string(to_string(c.kind))}, {"scenarioId", c.scenarioId}, {"message", c.message}};
  if (c.kind == Conflict::Kind::StepMismatch) {
    put_opt(j, "position", c.position);
    j["expected"] = c.expected;
    j["found"] = c.found;
  }
  if (c.kind == Conflict::Kind::DuplicateArm) {
    j["objectRef"] = c.objectRef;
    j["stateName"] = c.stateName;
  }
}

void from_json(const json& j, Conflict& c) {
  c = Conflict{};
  c.kind = parse_conflict_kind(j.at("kind").get<std::string>());
  c.scenarioId = j.value("scenarioId", std::string{});
  c.message = j.value("message", std::string{});
  if (j.contains("position")) c.position = j.at("position").get<std::size_t>();
  c.expected = j.value("expected", std::string{});
  c.found = j.value("found", std::string{});
  c.objectRef = j.value("objectRef", std::string{});
  c.stateName = j.value("stateName", std::string{});
}

void to_json(json& j, const CoverageReport& c) {
  json states = json::array();
  for (const auto& s : c.uncoveredStates) states.push_back({{"objectRef", s.objectRef}, {"stateName", s.stateName}});
  json suggestions = json::array();
  for (const auto& s : c.suggestions) {
    json js{{"text", s.text}, {"pathPrefix", s.pathPrefix}};
    put_opt(js, "decision", s.decision);
    if (s.state) js["state"] = {{"objectRef", s.state->objectRef}, {"stateName", s.state->stateName}};
    suggestions.push_back(std::move(js));
  }
  j = json{{"uncoveredDecisions", c.uncoveredDecisions},
           {"uncoveredStates", std::move(states)},
           {"suggestions", std::move(suggestions)},
           {"complete", c.complete()}};
}

void from_json(const json& j, CoverageReport& c) {
  c = CoverageReport{};
  c.uncoveredDecisions = j.at("uncoveredDecisions").get<std::vector<std::string>>();
  for (const auto& s : j.at("uncoveredStates")) {
    c.uncoveredStates.push_back({s.at("objectRef").get<std::string>(), s.at("stateName").get<std::string>()});
  }
  for (const auto& js : j.at("suggestions")) {
    Suggestion s;
    s.text = js.at("text").get<std::string>();
    s.pathPrefix = js.value("pathPrefix", std::vector<std::string>{});
    if (js.contains("decision")) s.decision = js.at("decision").get<std::string>();
    if (js.contains("state")) {
      s.state = UncoveredState{js.at("state").at("objectRef").get<std::string>(),
                               js.at("state").at("stateName").get<std::string>()};
    }
    c.suggestions.push_back(std::move(s));
  }
}

}  // namespace teachflow::synthesis
