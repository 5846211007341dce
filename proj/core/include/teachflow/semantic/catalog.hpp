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

#include "teachflow/dom/snapshot.hpp"

namespace teachflow::semantic {

inline constexpr std::string_view kSearchResultTable = "SearchResultTable";
inline constexpr std::string_view kFileAttachment = "FileAttachment";

struct CatalogEntry {
  std::string kind;
  std::string noun;  // word appended to friendly names, e.g. "table"
  std::vector<std::string> states;
  std::vector<std::string> hintTags;
  std::vector<std::string> attributePatterns;  // CSS attribute tests without brackets
  std::optional<std::string> evaluator;        // DSL text for kinds without a built-in rule

  /// Does an element satisfy this entry's detection hints?
  bool matches(const dom::Node& node) const;
};

class SemanticCatalog {
 public:
  SemanticCatalog() = default;
  explicit SemanticCatalog(std::vector<CatalogEntry> entries);

  /// Catalog file: {"entries": [{kind, states[], hints{tags[], attributePatterns[]}}]}.
  /// Throws Error(InvalidCatalog).
  static SemanticCatalog from_json(const nlohmann::json& j);
  static SemanticCatalog load(const std::string& path);
  /// The catalog shipped with the library (table and attachment kinds).
  static const SemanticCatalog& builtin();

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  /// Lookup by kind or noun, case-insensitive.
  const CatalogEntry* find(std::string_view kindOrNoun) const;
  nlohmann::json to_json() const;

 private:
  std::vector<CatalogEntry> entries_;
};

}  // namespace teachflow::semantic
