// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/dom/snapshot.hpp"

namespace teachflow::dom {

struct ById {
  std::string value;
  bool operator==(const ById&) const = default;
};
struct ByName {
  std::string value;
  bool operator==(const ByName&) const = default;
};
struct ByLabelAnchor {
  std::string labelText;
  std::string tag;
  bool operator==(const ByLabelAnchor&) const = default;
};
struct ByPath {
  std::vector<int> path;  // 0-based element-child indices from the scope root
  bool operator==(const ByPath&) const = default;
};

using Strategy = std::variant<ById, ByName, ByLabelAnchor, ByPath>;

/// Prioritized element locator. `scopeHops` locate, in order, the shadow
/// roots enclosing the target; `candidates` are then tried inside the
/// innermost scope. ByPath is always the last candidate.
struct SelectorSpec {
  std::vector<std::vector<Strategy>> scopeHops;
  std::vector<Strategy> candidates;
  std::size_t chosen = 0;

  bool operator==(const SelectorSpec&) const = default;
};

SelectorSpec generate_selector(const DomSnapshot& snapshot, std::string_view nodeId);
/// Returns the node id of the first candidate with a unique match.
/// Throws ElementNotFound, or AmbiguousMatch when every candidate that
/// matched anything matched more than once.
std::string resolve_selector(const DomSnapshot& snapshot, const SelectorSpec& spec);
std::optional<NodeIndex> try_resolve(const DomSnapshot& snapshot, const SelectorSpec& spec);

/// Index of the first strategy that resolves uniquely, if any.
std::optional<std::size_t> first_unique(const DomSnapshot& snapshot, const SelectorSpec& spec);
/// Elements a single strategy matches inside the scope rooted at `scopeRoot`.
std::vector<NodeIndex> match_strategy(const DomSnapshot& snapshot, NodeIndex scopeRoot,
                                      const Strategy& strategy);

/// Adds candidates of `other` missing from `spec`, keeping ByPath last.
void absorb_candidates(SelectorSpec& spec, const SelectorSpec& other);

std::string describe(const Strategy& s);

void to_json(nlohmann::json& j, const Strategy& s);
void from_json(const nlohmann::json& j, Strategy& s);
void to_json(nlohmann::json& j, const SelectorSpec& s);
void from_json(const nlohmann::json& j, SelectorSpec& s);

}  // namespace teachflow::dom
