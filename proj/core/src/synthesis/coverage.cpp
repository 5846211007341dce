// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <functional>
#include <set>

#include "teachflow/error.hpp"
#include "teachflow/synthesis/program.hpp"

namespace teachflow::synthesis {

CoverageReport coverage(const AutomationProgram& program, const model::InputSchema& schema,
                        std::span<const Conflict> openConflicts) {
  if (!openConflicts.empty()) {
    throw Error(ErrorCode::InconsistentProgram,
                std::to_string(openConflicts.size()) + " unresolved conflict(s): " + openConflicts.front().message);
  }
  try {
    check_program(program, &schema);
  } catch (const Error& e) {
    throw Error(ErrorCode::InconsistentProgram, e.what());
  }

  CoverageReport report;
  std::set<std::string> decided;
  std::vector<Suggestion> stateSuggestions;

  std::function<void(const std::string&, std::vector<std::string>&)> visit =
      [&](const std::string& id, std::vector<std::string>& path) {
        const auto& n = program.node(id);
        switch (n.kind) {
          case NodeKind::Linear:
            path.push_back(n.step->label);
            visit(n.next, path);
            path.pop_back();
            break;
          case NodeKind::Branch: {
            std::vector<std::string> states;
            if (n.object) states = n.object->stateNames;
            for (const auto& [s, next] : n.arms) {
              if (std::find(states.begin(), states.end(), s) == states.end()) states.push_back(s);
            }
            for (const auto& s : states) {
              const bool viaArm = n.arms.count(s) > 0;
              const bool viaElse = n.elseArm && n.elseArm->admits(s);
              if (viaArm || viaElse) continue;
              UncoveredState u{n.objectRef, s};
              report.uncoveredStates.push_back(u);
              Suggestion sg;
              sg.state = u;
              sg.pathPrefix = path;
              sg.text = "Teach a scenario where " + n.label + " is \"" + s + "\"";
              stateSuggestions.push_back(std::move(sg));
            }
            for (const auto& [s, next] : n.arms) {
              path.push_back(n.label + ": " + s);
              visit(next, path);
              path.pop_back();
            }
            if (n.elseArm) {
              path.push_back(n.label + ": other");
              visit(n.elseArm->next, path);
              path.pop_back();
            }
            break;
          }
          case NodeKind::Leaf:
            decided.insert(*n.decision);
            break;
          case NodeKind::ExtractLeaf:
            break;
        }
      };
  if (!program.empty()) {
    std::vector<std::string> path;
    visit(program.entry, path);
  }

  for (const auto& d : schema.decisionValues) {
    if (decided.count(d)) continue;
    report.uncoveredDecisions.push_back(d);
    Suggestion sg;
    sg.decision = d;
    sg.text = "Teach a scenario that ends with the decision \"" + d + "\"";
    report.suggestions.push_back(std::move(sg));
  }
  for (auto& sg : stateSuggestions) report.suggestions.push_back(std::move(sg));
  return report;
}

}  // namespace teachflow::synthesis
