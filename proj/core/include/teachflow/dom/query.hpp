// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "teachflow/dom/snapshot.hpp"

namespace teachflow::dom {

/// A small CSS selector subset: type, `*`, `#id`, `.class`, `[attr]`,
/// `[attr=v]`, `[attr*=v]`, `[attr^=v]`, `[attr$=v]`, descendant and `>`
/// combinators, and `,` lists. Queries never cross shadow-scope boundaries.
class Query {
 public:
  /// Throws Error(InvalidQuery).
  static Query parse(std::string_view selector);

  /// Matching elements strictly inside `context`, in document order.
  /// Ancestor constraints are checked up to and including `context`.
  std::vector<NodeIndex> select(const DomSnapshot& snapshot, NodeIndex context) const;
  /// Does `node` match, treating `context` as the outermost ancestor?
  bool matches(const DomSnapshot& snapshot, NodeIndex node, NodeIndex context = 0) const;
  /// Matches a detached node against alternatives without combinators.
  bool matches_node(const Node& node) const;

  const std::string& source() const { return source_; }

 private:
  struct AttrTest {
    std::string name;
    char op = 0;  // 0 presence, '=', '*', '^', '$', '~'
    std::string value;
  };
  struct Compound {
    std::string tag;  // empty == any
    std::vector<AttrTest> attrs;
    char combinator = ' ';  // relation to the previous compound
  };
  using Complex = std::vector<Compound>;

  bool match_compound(const Node& n, const Compound& c) const;
  bool match_complex(const DomSnapshot& s, NodeIndex node, const Complex& cx, std::size_t pos,
                     NodeIndex context) const;

  std::string source_;
  std::vector<Complex> alternatives_;
};

}  // namespace teachflow::dom
