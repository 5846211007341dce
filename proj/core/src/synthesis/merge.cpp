// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>

#include "teachflow/dom/selector.hpp"
#include "teachflow/error.hpp"
#include "teachflow/synthesis/program.hpp"

namespace teachflow::synthesis {

namespace {

using model::StepKind;

bool same_binding(const std::optional<model::ParameterBinding>& a,
                  const std::optional<model::ParameterBinding>& b) {
  if (!a || !b) return a.has_value() == b.has_value();
  return *a == *b;
}

bool steps_match(const model::Step& a, const model::Step& b) {
  if (a.kind != b.kind || a.label != b.label) return false;
  if (a.kind == StepKind::Type && !same_binding(a.binding, b.binding)) return false;
  if (a.kind == StepKind::Extract && a.extractionTarget != b.extractionTarget) return false;
  return true;
}

std::string describe_step(const model::Step& s) {
  std::string out = std::string(model::to_string(s.kind)) + " \"" + s.label + "\"";
  if (s.kind == StepKind::Type && s.binding) out += " <- " + model::describe(*s.binding);
  return out;
}

// Where the walk currently stands: the pointer that leads to the node.
struct Slot {
  enum class Kind { Entry, Next, Arm, Else };
  Kind kind = Kind::Entry;
  std::size_t parent = 0;
  std::string state;
};

struct ConflictSignal {
  Conflict conflict;
};

class Merger {
 public:
  Merger(const AutomationProgram& program, const model::Scenario& scenario)
      : p_(program), sc_(scenario), steps_(scenario.steps) {}

  AutomationProgram run() {
    if (p_.empty()) {
      p_.entry = chain(0);
    } else {
      walk();
    }
    if (std::find(p_.contributingScenarios.begin(), p_.contributingScenarios.end(), sc_.id) ==
        p_.contributingScenarios.end()) {
      p_.contributingScenarios.push_back(sc_.id);
    }
    return std::move(p_);
  }

 private:
  std::string& target(const Slot& s) {
    switch (s.kind) {
      case Slot::Kind::Entry: return p_.entry;
      case Slot::Kind::Next: return p_.nodes[s.parent].next;
      case Slot::Kind::Arm: return p_.nodes[s.parent].arms.at(s.state);
      case Slot::Kind::Else: return p_.nodes[s.parent].elseArm->next;
    }
    return p_.entry;
  }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < p_.nodes.size(); ++i) {
      if (p_.nodes[i].id == id) return i;
    }
    throw Error(ErrorCode::MalformedProgram, "dangling node reference " + id);
  }

  std::string add(StepNode n) {
    std::size_t k = p_.nodes.size();
    auto taken = [&](const std::string& id) {
      return std::any_of(p_.nodes.begin(), p_.nodes.end(), [&](const StepNode& x) { return x.id == id; });
    };
    while (taken("n" + std::to_string(k))) ++k;
    n.id = "n" + std::to_string(k);
    p_.nodes.push_back(std::move(n));
    return p_.nodes.back().id;
  }

  StepNode branch_for(const model::Step& s) const {
    StepNode b;
    b.kind = NodeKind::Branch;
    b.objectRef = s.objectRef.value_or("");
    b.label = s.label;
    b.object = s.object;
    return b;
  }

  // Nodes for steps[i..], returning the id of the first.
  std::string chain(std::size_t i) {
    if (i == steps_.size()) {
      StepNode n;
      n.kind = NodeKind::ExtractLeaf;
      return add(std::move(n));
    }
    const auto& s = steps_[i];
    if (s.kind == StepKind::Decide) {
      StepNode n;
      n.kind = NodeKind::Leaf;
      n.decision = s.decision;
      return add(std::move(n));
    }
    auto rest = chain(i + 1);
    if (s.kind == StepKind::AssertState) {
      auto b = branch_for(s);
      const auto guard = model::StateGuard::parse(s.stateName.value_or(""));
      if (guard.negated) {
        b.elseArm = ElseArm{{guard.state}, rest};
      } else {
        b.arms[guard.state] = rest;
      }
      return add(std::move(b));
    }
    StepNode n;
    n.kind = NodeKind::Linear;
    n.step = s;
    n.next = rest;
    return add(std::move(n));
  }

  [[noreturn]] void conflict(Conflict::Kind kind, std::string message) {
    Conflict c;
    c.kind = kind;
    c.scenarioId = sc_.id;
    c.message = std::move(message);
    throw ConflictSignal{std::move(c)};
  }

  [[noreturn]] void mismatch(std::size_t i, const std::string& expected, const std::string& found) {
    if (followed_) {
      Conflict c;
      c.kind = Conflict::Kind::DuplicateArm;
      c.scenarioId = sc_.id;
      c.objectRef = followed_->objectRef;
      c.stateName = followed_->stateName;
      c.message = "the \"" + c.stateName + "\" arm of " + c.objectRef + " already continues with " + expected +
                  ", but this scenario continues with " + found;
      throw ConflictSignal{std::move(c)};
    }
    Conflict c;
    c.kind = Conflict::Kind::StepMismatch;
    c.scenarioId = sc_.id;
    c.position = i;
    c.expected = expected;
    c.found = found;
    c.message = "step " + std::to_string(i) + ": expected " + expected + ", found " + found;
    throw ConflictSignal{std::move(c)};
  }

  // Puts a branch in front of the node behind `slot` for the condition at
  // steps[i]. Returns true when the walk continues into the old node.
  bool insert_branch(Slot& slot, std::size_t i) {
    const auto& s = steps_[i];
    const auto guard = model::StateGuard::parse(s.stateName.value_or(""));
    const std::string old = target(slot);
    auto b = branch_for(s);
    if (guard.negated) {
      b.elseArm = ElseArm{{guard.state}, old};
      auto id = add(std::move(b));
      target(slot) = id;
      slot = Slot{Slot::Kind::Else, index_of(id), {}};
      followedArm(s, guard.to_string());
      return true;
    }
    b.elseArm = ElseArm{{}, old};
    auto rest = chain(i + 1);
    b.arms[guard.state] = rest;
    target(slot) = add(std::move(b));
    return false;
  }

  void followedArm(const model::Step& s, std::string state) {
    followed_ = UncoveredState{s.objectRef.value_or(""), std::move(state)};
  }

  void walk() {
    Slot slot;
    std::size_t i = 0;
    while (true) {
      const std::size_t at = index_of(target(slot));
      const bool ended = i == steps_.size();
      const model::Step* s = ended ? nullptr : &steps_[i];

      if (s && s->kind == StepKind::AssertState && p_.nodes[at].kind != NodeKind::Branch) {
        if (!insert_branch(slot, i)) return;
        ++i;
        continue;
      }

      switch (p_.nodes[at].kind) {
        case NodeKind::Leaf: {
          const auto& d = *p_.nodes[at].decision;
          if (s && s->kind == StepKind::Decide) {
            if (s->decision == d) return;
            conflict(Conflict::Kind::DecisionContradiction,
                     "the same path already decides \"" + d + "\", this scenario decides \"" +
                         s->decision.value_or("") + "\"");
          }
          conflict(Conflict::Kind::DivergenceWithoutCondition,
                   ended ? "the program decides \"" + d + "\" where this scenario ends without a decision"
                         : "the program decides \"" + d + "\" where this scenario continues with " +
                               describe_step(*s) + "; add a condition to tell the cases apart");
        }
        case NodeKind::ExtractLeaf:
          if (ended) return;
          conflict(Conflict::Kind::DivergenceWithoutCondition,
                   "the program ends where this scenario continues with " + describe_step(*s) +
                       "; add a condition to tell the cases apart");
        case NodeKind::Linear: {
          auto& node = p_.nodes[at];
          if (ended || s->kind == StepKind::Decide) {
            conflict(Conflict::Kind::DivergenceWithoutCondition,
                     "the program continues with " + describe_step(*node.step) + " where this scenario " +
                         (ended ? std::string("ends") : "decides \"" + s->decision.value_or("") + "\"") +
                         "; add a condition to tell the cases apart");
          }
          if (!steps_match(*node.step, *s)) mismatch(i, describe_step(*node.step), describe_step(*s));
          if (node.step->selector && s->selector) dom::absorb_candidates(*node.step->selector, *s->selector);
          followed_.reset();
          slot = Slot{Slot::Kind::Next, at, {}};
          ++i;
          break;
        }
        case NodeKind::Branch: {
          auto& node = p_.nodes[at];
          if (s && s->kind == StepKind::AssertState) {
            if (node.label != s->label) {
              mismatch(i, "condition on " + node.label, "condition on " + s->label);
            }
            const auto guard = model::StateGuard::parse(s->stateName.value_or(""));
            if (!guard.negated) {
              if (node.arms.count(guard.state)) {
                slot = Slot{Slot::Kind::Arm, at, guard.state};
                followedArm(*s, guard.state);
                ++i;
                break;
              }
              auto rest = chain(i + 1);
              p_.nodes[at].arms[guard.state] = rest;
              return;
            }
            if (node.elseArm) {
              auto& ex = node.elseArm->excluded;
              if (std::find(ex.begin(), ex.end(), guard.state) == ex.end()) {
                ex.push_back(guard.state);
                std::sort(ex.begin(), ex.end());
              }
              slot = Slot{Slot::Kind::Else, at, {}};
              followedArm(*s, guard.to_string());
              ++i;
              break;
            }
            auto rest = chain(i + 1);
            p_.nodes[at].elseArm = ElseArm{{guard.state}, rest};
            return;
          }
          if (node.elseArm) {
            slot = Slot{Slot::Kind::Else, at, {}};
            followed_ = UncoveredState{node.objectRef, "other"};
            break;
          }
          auto rest = chain(i);
          p_.nodes[at].elseArm = ElseArm{{}, rest};
          return;
        }
      }
    }
  }

  AutomationProgram p_;
  const model::Scenario& sc_;
  const std::vector<model::Step>& steps_;
  std::optional<UncoveredState> followed_;
};

}  // namespace

MergeOutcome merge_scenario(const AutomationProgram& program, const model::Scenario& scenario) {
  if (scenario.steps.empty()) {
    throw Error(ErrorCode::InvalidScenario, "scenario " + scenario.id + " has no steps");
  }
  try {
    return MergeOutcome{Merger(program, scenario).run(), std::nullopt};
  } catch (ConflictSignal& sig) {
    return MergeOutcome{program, std::move(sig.conflict)};
  }
}

SynthesisResult synthesize_all(std::span<const model::Scenario> scenarios) {
  SynthesisResult out;
  for (const auto& s : scenarios) {
    auto merged = merge_scenario(out.program, s);
    if (merged.conflict) {
      out.conflicts.push_back(std::move(*merged.conflict));
    } else {
      out.program = std::move(merged.program);
    }
  }
  return out;
}

}  // namespace teachflow::synthesis
