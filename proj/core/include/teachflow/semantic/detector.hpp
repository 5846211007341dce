// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/dom/selector.hpp"
#include "teachflow/dom/snapshot.hpp"
#include "teachflow/semantic/catalog.hpp"
#include "teachflow/semantic/predicate.hpp"

namespace teachflow::semantic {

/// A recognised high-level widget and the classifier for its state.
struct SemanticObject {
  std::string objectId;
  std::string kind;
  std::string friendlyName;
  dom::SelectorSpec anchorSelector;
  std::vector<std::string> stateNames;
  StatePredicate predicate;

  bool operator==(const SemanticObject&) const = default;
};

void to_json(nlohmann::json& j, const SemanticObject& o);
void from_json(const nlohmann::json& j, SemanticObject& o);

struct Anchor {
  dom::NodeIndex node;
  const CatalogEntry* entry;
};

inline constexpr int kAnchorHops = 4;

/// Nearest element, from `node` up to kAnchorHops ancestors, that a catalog
/// entry's hints accept.
std::optional<Anchor> find_anchor(const dom::DomSnapshot& snapshot, dom::NodeIndex node,
                                  const SemanticCatalog& catalog);

/// Caption, else a heading inside the anchor, else the nearest preceding
/// heading, else the anchor's label; suffixed with the kind's noun.
std::string friendly_name(const dom::DomSnapshot& snapshot, dom::NodeIndex anchor,
                          const CatalogEntry& entry);

/// The rule-based classifier for an anchor of the given kind.
StatePredicate rule_predicate(const dom::DomSnapshot& snapshot, dom::NodeIndex anchor,
                              const CatalogEntry& entry);

/// Rule-based detection. Throws Error(NoSemanticMatch) or Error(UnknownNode).
SemanticObject detect_objects(const dom::DomSnapshot& snapshot, std::string_view selectedNodeId,
                              const SemanticCatalog& catalog);

/// Total and pure; a state from the object's catalog entry or "unknown".
std::string evaluate_state(const SemanticObject& object, const dom::DomSnapshot& snapshot);

struct ConditionSuggestion {
  std::string stateName;
  std::string text;
  bool operator==(const ConditionSuggestion&) const = default;
};

/// One suggestion per state, current state first, otherwise catalog order.
std::vector<ConditionSuggestion> suggest_conditions(const SemanticObject& object,
                                                    const dom::DomSnapshot& snapshot);

/// Checks that every case names a state of `entry`. Throws InvalidPredicate.
void validate_predicate(const StatePredicate& predicate, const CatalogEntry& entry);

}  // namespace teachflow::semantic
