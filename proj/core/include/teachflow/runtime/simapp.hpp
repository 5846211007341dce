// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/dom/selector.hpp"
#include "teachflow/dom/snapshot.hpp"

namespace teachflow::runtime {

/// What the step executor needs from a target application.
class Driver {
 public:
  virtual ~Driver() = default;

  virtual const dom::DomSnapshot& current() const = 0;
  /// Throws ElementNotFound or AmbiguousMatch.
  virtual std::string resolve(const dom::SelectorSpec& selector) const;
  /// Throws TransitionMissing when the click leads nowhere.
  virtual void click(const std::string& nodeId) = 0;
  virtual void type(const std::string& nodeId, const std::string& value) = 0;
  virtual std::string read_text(const std::string& nodeId) const;
};

struct Transition {
  enum class Trigger { Click, Type };

  std::string from;
  Trigger on = Trigger::Click;
  std::string target;  // selector; matches the acted-on element or an ancestor
  // Query: dataset records whose `field` equals the typed input `input`.
  std::optional<std::string> queryField;
  std::optional<std::string> queryInput;
  // Guards.
  std::optional<bool> whenRecords;  // true: some records, false: none
  std::optional<std::string> whenInputKey;
  std::optional<std::string> whenInputEquals;
  // Which record becomes `selected`: "first", or "clicked" (nearest data-index).
  std::optional<std::string> select;
  std::string to;
};

/// Pages are templates rendered against {inputs, records, recordCount,
/// selected, dataset}.
struct SimAppSpec {
  std::map<std::string, std::string> pages;
  std::string initialPage;
  nlohmann::json dataset = nlohmann::json::array();
  std::vector<Transition> transitions;

  /// Throws InvalidAppSpec.
  static SimAppSpec from_json(const nlohmann::json& j);
  static SimAppSpec load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// A deterministic in-memory web application driven by a SimAppSpec.
class SimApp : public Driver {
 public:
  explicit SimApp(std::shared_ptr<const SimAppSpec> spec);

  const dom::DomSnapshot& current() const override { return snapshot_; }
  void click(const std::string& nodeId) override;
  void type(const std::string& nodeId, const std::string& value) override;

  /// Back to the initial page with no inputs, records or selection.
  void reset();
  const std::string& page() const { return page_; }
  const std::map<std::string, std::string>& inputs() const { return inputs_; }

 private:
  void render();
  void fire(Transition::Trigger trigger, dom::NodeIndex node);
  bool applies(const Transition& t, Transition::Trigger trigger, dom::NodeIndex node) const;

  std::shared_ptr<const SimAppSpec> spec_;
  std::string page_;
  std::map<std::string, std::string> inputs_;
  nlohmann::json records_ = nlohmann::json::array();
  nlohmann::json selected_;
  dom::DomSnapshot snapshot_;
  std::size_t renders_ = 0;
};

}  // namespace teachflow::runtime
