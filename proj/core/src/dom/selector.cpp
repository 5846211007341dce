// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/dom/selector.hpp"

#include <algorithm>

#include "teachflow/dom/label.hpp"
#include "teachflow/error.hpp"

namespace teachflow::dom {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Strategy> candidates_for(const DomSnapshot& s, NodeIndex node) {
  std::vector<Strategy> out;
  const auto& n = s.node(node);
  if (const auto* id = n.attr("id"); id && !id->empty()) out.emplace_back(ById{*id});
  if (const auto* name = n.attr("name"); name && !name->empty()) out.emplace_back(ByName{*name});
  auto label = associate_label(s, node);
  if (label.source != LabelSource::Fallback) {
    out.emplace_back(ByLabelAnchor{label.text, n.tag});
  }
  ByPath path;
  NodeIndex root = s.scope_root(node);
  NodeIndex cur = node;
  while (cur != root) {
    auto parent = *s.node(cur).parent;
    auto kids = s.element_children(parent);
    auto pos = std::find(kids.begin(), kids.end(), cur) - kids.begin();
    path.path.push_back(static_cast<int>(pos));
    cur = parent;
  }
  std::reverse(path.path.begin(), path.path.end());
  out.emplace_back(std::move(path));
  return out;
}

struct Resolution {
  std::optional<NodeIndex> node;
  std::optional<std::size_t> index;
  bool sawAmbiguous = false;
};

Resolution resolve_in(const DomSnapshot& s, NodeIndex scopeRoot,
                      const std::vector<Strategy>& candidates) {
  Resolution r;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    auto hits = match_strategy(s, scopeRoot, candidates[k]);
    if (hits.size() == 1) {
      r.node = hits.front();
      r.index = k;
      return r;
    }
    if (hits.size() > 1) r.sawAmbiguous = true;
  }
  return r;
}

}  // namespace

std::vector<NodeIndex> match_strategy(const DomSnapshot& s, NodeIndex scopeRoot,
                                      const Strategy& strategy) {
  return std::visit(
      overloaded{
          [&](const ById& b) {
            std::vector<NodeIndex> out;
            for (auto i : s.elements_in_scope(scopeRoot)) {
              const auto* v = s.node(i).attr("id");
              if (v && *v == b.value) out.push_back(i);
            }
            return out;
          },
          [&](const ByName& b) {
            std::vector<NodeIndex> out;
            for (auto i : s.elements_in_scope(scopeRoot)) {
              const auto* v = s.node(i).attr("name");
              if (v && *v == b.value) out.push_back(i);
            }
            return out;
          },
          [&](const ByLabelAnchor& b) {
            std::vector<NodeIndex> out;
            for (auto i : s.elements_in_scope(scopeRoot)) {
              if (s.node(i).tag != b.tag) continue;
              auto l = associate_label(s, i);
              if (l.source != LabelSource::Fallback && l.text == b.labelText) out.push_back(i);
            }
            return out;
          },
          [&](const ByPath& b) {
            std::vector<NodeIndex> out;
            NodeIndex cur = scopeRoot;
            for (int idx : b.path) {
              auto kids = s.element_children(cur);
              if (idx < 0 || static_cast<std::size_t>(idx) >= kids.size()) return out;
              cur = kids[static_cast<std::size_t>(idx)];
            }
            if (cur != scopeRoot) out.push_back(cur);
            return out;
          },
      },
      strategy);
}

SelectorSpec generate_selector(const DomSnapshot& snapshot, std::string_view nodeId) {
  auto node = snapshot.index_of(nodeId);
  if (!snapshot.node(node).is_element() || node == 0) {
    throw Error(ErrorCode::UnknownNode, "'" + std::string(nodeId) + "' is not an element");
  }
  SelectorSpec spec;
  std::vector<NodeIndex> hosts;
  for (NodeIndex r = snapshot.scope_root(node); r != 0; r = snapshot.scope_root(r)) {
    hosts.push_back(r);
  }
  std::reverse(hosts.begin(), hosts.end());
  for (auto h : hosts) spec.scopeHops.push_back(candidates_for(snapshot, h));
  spec.candidates = candidates_for(snapshot, node);
  spec.chosen = first_unique(snapshot, spec).value_or(spec.candidates.size() - 1);
  return spec;
}

std::optional<std::size_t> first_unique(const DomSnapshot& snapshot, const SelectorSpec& spec) {
  NodeIndex scope = 0;
  for (const auto& hop : spec.scopeHops) {
    auto r = resolve_in(snapshot, scope, hop);
    if (!r.node) return std::nullopt;
    scope = *r.node;
  }
  return resolve_in(snapshot, scope, spec.candidates).index;
}

std::optional<NodeIndex> try_resolve(const DomSnapshot& snapshot, const SelectorSpec& spec) {
  NodeIndex scope = 0;
  for (const auto& hop : spec.scopeHops) {
    auto r = resolve_in(snapshot, scope, hop);
    if (!r.node) return std::nullopt;
    scope = *r.node;
  }
  return resolve_in(snapshot, scope, spec.candidates).node;
}

std::string resolve_selector(const DomSnapshot& snapshot, const SelectorSpec& spec) {
  NodeIndex scope = 0;
  auto fail = [&](const Resolution& r, const std::vector<Strategy>& c) -> std::string {
    std::string what = c.empty() ? std::string("<empty selector>") : describe(c.front());
    if (r.sawAmbiguous) {
      throw Error(ErrorCode::AmbiguousMatch, "selector " + what + " is ambiguous in '" +
                                                 snapshot.id() + "'");
    }
    throw Error(ErrorCode::ElementNotFound,
                "selector " + what + " matched nothing in '" + snapshot.id() + "'");
  };
  for (const auto& hop : spec.scopeHops) {
    auto r = resolve_in(snapshot, scope, hop);
    if (!r.node) fail(r, hop);
    scope = *r.node;
  }
  auto r = resolve_in(snapshot, scope, spec.candidates);
  if (!r.node) fail(r, spec.candidates);
  return snapshot.node(*r.node).nodeId;
}

void absorb_candidates(SelectorSpec& spec, const SelectorSpec& other) {
  if (spec.scopeHops != other.scopeHops) return;
  for (const auto& c : other.candidates) {
    if (std::holds_alternative<ByPath>(c)) continue;
    if (std::find(spec.candidates.begin(), spec.candidates.end(), c) != spec.candidates.end()) {
      continue;
    }
    auto pathPos = std::find_if(spec.candidates.begin(), spec.candidates.end(),
                                [](const Strategy& s) { return std::holds_alternative<ByPath>(s); });
    spec.candidates.insert(pathPos, c);
  }
}

std::string describe(const Strategy& s) {
  return std::visit(overloaded{
                        [](const ById& b) { return "#" + b.value; },
                        [](const ByName& b) { return "[name=" + b.value + "]"; },
                        [](const ByLabelAnchor& b) { return b.tag + "\"" + b.labelText + "\""; },
                        [](const ByPath& b) {
                          std::string out = "path[";
                          for (std::size_t i = 0; i < b.path.size(); ++i) {
                            if (i) out += ",";
                            out += std::to_string(b.path[i]);
                          }
                          return out + "]";
                        },
                    },
                    s);
}

void to_json(nlohmann::json& j, const Strategy& s) {
  std::visit(overloaded{
                 [&](const ById& b) { j = {{"byId", b.value}}; },
                 [&](const ByName& b) { j = {{"byName", b.value}}; },
                 [&](const ByLabelAnchor& b) {
                   j = {{"byLabelAnchor", {{"labelText", b.labelText}, {"tag", b.tag}}}};
                 },
                 [&](const ByPath& b) { j = {{"byPath", b.path}}; },
             },
             s);
}

void from_json(const nlohmann::json& j, Strategy& s) {
  if (j.contains("byId")) {
    s = ById{j.at("byId").get<std::string>()};
  } else if (j.contains("byName")) {
    s = ByName{j.at("byName").get<std::string>()};
  } else if (j.contains("byLabelAnchor")) {
    const auto& b = j.at("byLabelAnchor");
    s = ByLabelAnchor{b.at("labelText").get<std::string>(), b.at("tag").get<std::string>()};
  } else if (j.contains("byPath")) {
    s = ByPath{j.at("byPath").get<std::vector<int>>()};
  } else {
    throw Error(ErrorCode::MalformedProgram, "unknown selector strategy: " + j.dump());
  }
}

void to_json(nlohmann::json& j, const SelectorSpec& s) {
  j = nlohmann::json{{"candidates", s.candidates}, {"chosen", s.chosen}};
  if (!s.scopeHops.empty()) j["scopeHops"] = s.scopeHops;
}

void from_json(const nlohmann::json& j, SelectorSpec& s) {
  s.candidates = j.at("candidates").get<std::vector<Strategy>>();
  s.chosen = j.value("chosen", std::size_t{0});
  s.scopeHops = j.contains("scopeHops") ? j.at("scopeHops").get<std::vector<std::vector<Strategy>>>()
                                        : std::vector<std::vector<Strategy>>{};
  if (s.candidates.empty()) throw Error(ErrorCode::MalformedProgram, "selector without candidates");
}

}  // namespace teachflow::dom
