// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teachflow::dom {

using NodeIndex = std::size_t;

struct Attribute {
  std::string name;
  std::string value;
  bool operator==(const Attribute&) const = default;
};

/// One node of a parsed page. Element nodes carry a lowercase tag; text
/// nodes use the pseudo tag "#text" and the document root "#document".
struct Node {
  std::string nodeId;
  std::string tag;
  std::vector<Attribute> attributes;
  std::string text;         // raw text, text nodes only
  std::string textContent;  // collapsed concatenation of descendant text
  std::vector<NodeIndex> children;
  std::optional<NodeIndex> parent;
  std::string scopeId;  // empty for the document scope

  bool is_element() const { return tag.front() != '#'; }
  bool is_text() const { return tag == "#text"; }
  const std::string* attr(std::string_view name) const;
};

/// Immutable, arena-backed page snapshot. Index 0 is always the root.
///
/// Element node ids are structural: "/" for the root and "/i/j/..." where
/// each component is the 0-based index among element siblings. Text nodes
/// are addressed as "<parent>/#k".
class DomSnapshot {
 public:
  DomSnapshot() = default;
  DomSnapshot(std::string id, std::string sourceHtml, std::vector<Node> nodes);

  const std::string& id() const { return id_; }
  const std::string& source_html() const { return source_; }
  DomSnapshot with_id(std::string id) const;

  const Node& root() const { return nodes_.front(); }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  std::span<const Node> nodes() const { return nodes_; }

  std::optional<NodeIndex> find(std::string_view nodeId) const;
  /// Throws Error(UnknownNode).
  NodeIndex index_of(std::string_view nodeId) const;

  std::vector<NodeIndex> element_children(NodeIndex i) const;
  /// All element nodes in document order, root excluded.
  std::vector<NodeIndex> elements() const;
  /// Node that starts the shadow scope `i` lives in (root for the document).
  NodeIndex scope_root(NodeIndex i) const;
  bool is_scope_root(NodeIndex i) const;
  /// Elements whose scopeId equals that of `scopeRoot`'s interior.
  std::vector<NodeIndex> elements_in_scope(NodeIndex scopeRoot) const;
  /// Is `node` inside the subtree of `ancestor` (inclusive)?
  bool contains(NodeIndex ancestor, NodeIndex node) const;

 private:
  std::string id_;
  std::string source_;
  std::vector<Node> nodes_;
  std::map<std::string, NodeIndex, std::less<>> byId_;
};

/// Tolerant HTML parser. Repairs mis-nested markup using the usual implied
/// end-tag rules; comments and doctype are dropped. Declarative shadow roots
/// (`<template shadowrootmode=...>`) open a new scope.
DomSnapshot parse_snapshot(std::string_view html, std::string id = {});

/// outerHTML of one node (or the whole document for the root).
std::string serialize(const DomSnapshot& snapshot, NodeIndex i);

bool is_void_element(std::string_view tag);

}  // namespace teachflow::dom
