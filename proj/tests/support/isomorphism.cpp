// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "isomorphism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace teachflow::testing {

namespace {

class Canon {
 public:
  explicit Canon(const synthesis::AutomationProgram& p) {
    for (const auto& n : p.nodes) byId_[n.id] = &n;
  }

  std::string of(const std::string& id) {
    auto it = byId_.find(id);
    if (it == byId_.end()) throw std::logic_error("dangling node " + id);
    if (!seen_.insert(id).second) throw std::logic_error("node " + id + " shared between paths");
    const auto& n = *it->second;
    switch (n.kind) {
      case synthesis::NodeKind::Linear: {
        const auto& s = *n.step;
        std::string out = "(" + std::string(model::to_string(s.kind)) + " '" + s.label + "'";
        if (s.binding) {
          if (const auto* c = std::get_if<model::ColumnRef>(&*s.binding)) {
            out += " col:" + c->column;
          } else {
            out += " lit:" + std::get<model::Literal>(*s.binding).text;
          }
        }
        if (s.extractionTarget) out += " into:" + *s.extractionTarget;
        if (s.objectRef) out += " obj:" + *s.objectRef;
        return out + ") " + of(n.next);
      }
      case synthesis::NodeKind::Branch: {
        std::vector<std::string> parts;
        for (const auto& [state, next] : n.arms) parts.push_back("'" + state + "': " + of(next));
        std::sort(parts.begin(), parts.end());
        std::string out = "[" + n.objectRef + " '" + n.label + "'";
        for (const auto& p : parts) out += " {" + p + "}";
        if (n.elseArm) {
          auto ex = n.elseArm->excluded;
          std::sort(ex.begin(), ex.end());
          out += " {else";
          for (const auto& e : ex) out += " -'" + e + "'";
          out += ": " + of(n.elseArm->next) + "}";
        }
        return out + "]";
      }
      case synthesis::NodeKind::Leaf: return "<" + n.decision.value_or("?") + ">";
      case synthesis::NodeKind::ExtractLeaf: return "<end>";
    }
    return {};
  }

  std::size_t visited() const { return seen_.size(); }

 private:
  std::map<std::string, const synthesis::StepNode*> byId_;
  std::set<std::string> seen_;
};

}  // namespace

std::string canonical_form(const synthesis::AutomationProgram& program) {
  if (program.empty()) return "()";
  Canon c(program);
  auto out = c.of(program.entry);
  if (c.visited() != program.nodes.size()) throw std::logic_error("unreachable nodes");
  return out;
}

bool isomorphic(const synthesis::AutomationProgram& a, const synthesis::AutomationProgram& b) {
  return canonical_form(a) == canonical_form(b);
}

}  // namespace teachflow::testing
