// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/semantic/detector.hpp"

#include <algorithm>

#include "teachflow/dom/label.hpp"
#include "teachflow/dom/query.hpp"
#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::semantic {

namespace {

bool is_heading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

std::string heading_text(const dom::DomSnapshot& s, dom::NodeIndex anchor) {
  const auto& a = s.node(anchor);
  if (a.tag == "table") {
    for (auto c : s.element_children(anchor)) {
      if (s.node(c).tag == "caption" && !s.node(c).textContent.empty()) {
        return s.node(c).textContent;
      }
    }
  }
  const auto inScope = s.elements_in_scope(s.scope_root(anchor));
  for (auto i : inScope) {
    if (i > anchor && s.contains(anchor, i) && is_heading(s.node(i).tag) &&
        !s.node(i).textContent.empty()) {
      return s.node(i).textContent;
    }
  }
  // Arena order is document order, so the nearest preceding heading is the
  // last heading before the anchor that is not one of its ancestors.
  std::string found;
  for (auto i : inScope) {
    if (i >= anchor) break;
    if (is_heading(s.node(i).tag) && !s.contains(i, anchor) && !s.node(i).textContent.empty()) {
      found = s.node(i).textContent;
    }
  }
  return found;
}

}  // namespace

void to_json(nlohmann::json& j, const SemanticObject& o) {
  j = nlohmann::json{{"objectId", o.objectId},
                     {"kind", o.kind},
                     {"friendlyName", o.friendlyName},
                     {"anchorSelector", o.anchorSelector},
                     {"stateNames", o.stateNames},
                     {"predicate", o.predicate.to_string()}};
}

void from_json(const nlohmann::json& j, SemanticObject& o) {
  o.objectId = j.at("objectId").get<std::string>();
  o.kind = j.at("kind").get<std::string>();
  o.friendlyName = j.at("friendlyName").get<std::string>();
  o.anchorSelector = j.at("anchorSelector").get<dom::SelectorSpec>();
  o.stateNames = j.at("stateNames").get<std::vector<std::string>>();
  o.predicate = StatePredicate::parse(j.at("predicate").get<std::string>());
}

std::optional<Anchor> find_anchor(const dom::DomSnapshot& snapshot, dom::NodeIndex node,
                                  const SemanticCatalog& catalog) {
  std::optional<dom::NodeIndex> cur = node;
  for (int hop = 0; hop <= kAnchorHops && cur && *cur != 0; ++hop) {
    for (const auto& e : catalog.entries()) {
      if (e.matches(snapshot.node(*cur))) return Anchor{*cur, &e};
    }
    if (snapshot.is_scope_root(*cur)) break;
    cur = snapshot.node(*cur).parent;
  }
  return std::nullopt;
}

std::string friendly_name(const dom::DomSnapshot& snapshot, dom::NodeIndex anchor,
                          const CatalogEntry& entry) {
  auto base = heading_text(snapshot, anchor);
  if (base.empty()) base = dom::associate_label(snapshot, anchor).text;
  if (entry.noun.empty() || text::ends_with_ci(base, entry.noun)) return base;
  return base + " " + entry.noun;
}

StatePredicate rule_predicate(const dom::DomSnapshot& snapshot, dom::NodeIndex anchor,
                              const CatalogEntry& entry) {
  StatePredicate p;
  if (entry.kind == kSearchResultTable) {
    std::string rows = "tr";
    if (!dom::Query::parse("tbody").select(snapshot, anchor).empty()) {
      rows = "tbody tr";
    } else if (snapshot.node(anchor).tag != "table") {
      rows = "[role=row]";
    }
    auto q = "\"" + rows + "\"";
    p = StatePredicate::parse("case \"no records\" when rowCount(" + q + ") == 0;\n"
                              "case \"one record\" when rowCount(" + q + ") == 1;\n"
                              "case \"multiple records\" when rowCount(" + q + ") > 1;");
  } else if (entry.kind == kFileAttachment) {
    p = StatePredicate::parse(
        "case \"present\" when exists(\"a[href]\");\n"
        "case \"absent\" when not exists(\"a[href]\");");
  } else if (entry.evaluator) {
    p = StatePredicate::parse(*entry.evaluator);
  } else {
    throw Error(ErrorCode::InvalidCatalog,
                "kind '" + entry.kind + "' has no built-in rule and no evaluator");
  }
  validate_predicate(p, entry);
  return p;
}

void validate_predicate(const StatePredicate& predicate, const CatalogEntry& entry) {
  for (const auto& c : predicate.cases()) {
    if (std::find(entry.states.begin(), entry.states.end(), c.state) == entry.states.end()) {
      throw Error(ErrorCode::InvalidPredicate,
                  "state \"" + c.state + "\" is not a state of " + entry.kind);
    }
  }
}

SemanticObject detect_objects(const dom::DomSnapshot& snapshot, std::string_view selectedNodeId,
                              const SemanticCatalog& catalog) {
  auto node = snapshot.index_of(selectedNodeId);
  auto anchor = find_anchor(snapshot, node, catalog);
  if (!anchor) {
    throw Error(ErrorCode::NoSemanticMatch,
                "no semantic object around '" + std::string(selectedNodeId) + "'");
  }
  SemanticObject o;
  o.kind = anchor->entry->kind;
  o.friendlyName = friendly_name(snapshot, anchor->node, *anchor->entry);
  o.objectId = text::slugify(o.friendlyName);
  o.anchorSelector = dom::generate_selector(snapshot, snapshot.node(anchor->node).nodeId);
  o.stateNames = anchor->entry->states;
  o.predicate = rule_predicate(snapshot, anchor->node, *anchor->entry);
  return o;
}

std::string evaluate_state(const SemanticObject& object, const dom::DomSnapshot& snapshot) {
  auto anchor = dom::try_resolve(snapshot, object.anchorSelector);
  auto state = object.predicate.evaluate(snapshot, anchor);
  if (std::find(object.stateNames.begin(), object.stateNames.end(), state) ==
      object.stateNames.end()) {
    return std::string(kUnknownState);
  }
  return state;
}

std::vector<ConditionSuggestion> suggest_conditions(const SemanticObject& object,
                                                    const dom::DomSnapshot& snapshot) {
  auto current = evaluate_state(object, snapshot);
  std::vector<std::string> order;
  if (current != kUnknownState) order.push_back(current);
  for (const auto& s : object.stateNames) {
    if (s != current) order.push_back(s);
  }
  std::vector<ConditionSuggestion> out;
  for (auto& s : order) {
    out.push_back({s, "Condition " + object.friendlyName + " " + s});
  }
  return out;
}

}  // namespace teachflow::semantic
