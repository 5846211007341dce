// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "replay_oracle.hpp"

#include <algorithm>
#include <set>

namespace teachflow::testing {

namespace {

bool same_step(const model::Step& a, const model::Step& b) {
  if (a.kind != b.kind || a.label != b.label) return false;
  if (a.kind == model::StepKind::Type && a.binding != b.binding) return false;
  if (a.kind == model::StepKind::Extract && a.extractionTarget != b.extractionTarget) return false;
  return true;
}

}  // namespace

ReplayResult replay(const synthesis::AutomationProgram& program, const model::Scenario& scenario,
                    const ObservedStates& observed) {
  ReplayResult r;
  const auto& steps = scenario.steps;
  std::size_t i = 0;
  std::set<std::string> seen;
  std::string cur = program.entry;
  auto fail = [&](std::string why) {
    r.failure = std::move(why);
    return r;
  };
  while (true) {
    if (!seen.insert(cur).second) return fail("node " + cur + " visited twice");
    const synthesis::StepNode* n = nullptr;
    for (const auto& x : program.nodes) {
      if (x.id == cur) n = &x;
    }
    if (!n) return fail("dangling node id " + cur);
    switch (n->kind) {
      case synthesis::NodeKind::Linear:
        if (i >= steps.size()) return fail("scenario ended before " + n->step->label);
        if (!same_step(*n->step, steps[i])) {
          return fail("step " + std::to_string(i) + ": program has " + n->step->label + ", scenario has " +
                      steps[i].label);
        }
        r.visited.push_back(steps[i++]);
        cur = n->next;
        break;
      case synthesis::NodeKind::Branch: {
        auto it = observed.find(n->objectRef);
        if (it == observed.end()) return fail("no observed state for " + n->objectRef);
        const auto& state = it->second;
        if (i < steps.size() && steps[i].kind == model::StepKind::AssertState &&
            steps[i].objectRef == n->objectRef) {
          if (!model::StateGuard::parse(*steps[i].stateName).admits(state)) {
            return fail("guard " + *steps[i].stateName + " rejects observed state " + state);
          }
          r.visited.push_back(steps[i++]);
        }
        if (auto arm = n->arms.find(state); arm != n->arms.end()) {
          cur = arm->second;
        } else if (n->elseArm && std::find(n->elseArm->excluded.begin(), n->elseArm->excluded.end(), state) ==
                                     n->elseArm->excluded.end()) {
          cur = n->elseArm->next;
        } else {
          return fail("no arm of " + n->objectRef + " accepts " + state);
        }
        break;
      }
      case synthesis::NodeKind::Leaf:
        if (i >= steps.size() || steps[i].kind != model::StepKind::Decide) return fail("leaf without decide step");
        r.visited.push_back(steps[i++]);
        r.decision = n->decision;
        if (i != steps.size()) return fail("steps left after the decision");
        r.ok = true;
        return r;
      case synthesis::NodeKind::ExtractLeaf:
        if (i != steps.size()) return fail("program ends before step " + std::to_string(i));
        r.ok = true;
        return r;
    }
  }
}

bool replays_faithfully(const synthesis::AutomationProgram& program, const model::Scenario& scenario,
                        const ObservedStates& observed, std::string* why) {
  const auto r = replay(program, scenario, observed);
  auto no = [&](const std::string& m) {
    if (why) *why = scenario.id + ": " + m;
    return false;
  };
  if (!r.ok) return no(r.failure);
  if (r.visited.size() != scenario.steps.size()) return no("visited a different number of steps");
  for (std::size_t k = 0; k < r.visited.size(); ++k) {
    if (!same_step(r.visited[k], scenario.steps[k])) return no("visited step " + std::to_string(k) + " differs");
  }
  const auto* d = model::decide_step(scenario);
  if ((d ? d->decision : std::nullopt) != r.decision) return no("reached a different decision");
  return true;
}

}  // namespace teachflow::testing
