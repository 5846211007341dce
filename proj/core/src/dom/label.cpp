// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/dom/label.hpp"

#include <algorithm>
#include <array>

#include "teachflow/text.hpp"

namespace teachflow::dom {

namespace {

constexpr int kProximityLevels = 3;

bool self_describing(std::string_view tag) {
  static constexpr std::array<std::string_view, 15> kTags = {
      "a", "button", "option", "summary", "label", "legend", "caption", "th",
      "h1", "h2", "h3", "h4", "h5", "h6", "li"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

// Controls a preceding caption can describe even though they hold no text.
bool labelable(std::string_view tag) {
  static constexpr std::array<std::string_view, 7> kTags = {"input", "select", "textarea", "button",
                                                            "meter", "output", "progress"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

std::string label_for(const DomSnapshot& s, NodeIndex node) {
  const auto* id = s.node(node).attr("id");
  if (!id || id->empty()) return {};
  for (auto i : s.elements_in_scope(s.scope_root(node))) {
    const auto& n = s.node(i);
    if (n.tag != "label") continue;
    const auto* f = n.attr("for");
    if (f && *f == *id) return n.textContent;
  }
  return {};
}

std::string proximity(const DomSnapshot& s, NodeIndex node) {
  NodeIndex cur = node;
  for (int level = 0; level < kProximityLevels; ++level) {
    if (s.is_scope_root(cur)) break;
    auto parent = s.node(cur).parent;
    if (!parent) break;
    const auto& siblings = s.node(*parent).children;
    auto it = std::find(siblings.begin(), siblings.end(), cur);
    while (it != siblings.begin()) {
      --it;
      const auto& sib = s.node(*it);
      if (sib.tag == "template" || sib.tag == "script" || sib.tag == "style") continue;
      if (!sib.textContent.empty()) return sib.textContent;
    }
    cur = *parent;
  }
  return {};
}

}  // namespace

Label associate_label(const DomSnapshot& snapshot, NodeIndex node) {
  const auto& n = snapshot.node(node);
  if (auto t = label_for(snapshot, node); !t.empty()) return {t, LabelSource::LabelFor};
  if (const auto* a = n.attr("aria-label")) {
    if (auto t = text::collapse_ws(*a); !t.empty()) return {t, LabelSource::AriaLabel};
  }
  if (const auto* p = n.attr("placeholder")) {
    if (auto t = text::collapse_ws(*p); !t.empty()) return {t, LabelSource::Placeholder};
  }
  const bool ownFirst = self_describing(n.tag);
  if (ownFirst && !n.textContent.empty()) return {n.textContent, LabelSource::OwnText};
  // An empty decorative element would otherwise share its neighbour's label.
  if (labelable(n.tag) || !n.textContent.empty()) {
    if (auto t = proximity(snapshot, node); !t.empty()) return {t, LabelSource::Proximity};
  }
  if (!n.textContent.empty()) return {n.textContent, LabelSource::OwnText};
  return {n.tag + " element", LabelSource::Fallback};
}

std::string associate_label(const DomSnapshot& snapshot, std::string_view nodeId) {
  return associate_label(snapshot, snapshot.index_of(nodeId)).text;
}

}  // namespace teachflow::dom
