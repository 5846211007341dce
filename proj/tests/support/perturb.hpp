// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>

#include "teachflow/dom/snapshot.hpp"

namespace teachflow::testing {

enum class Perturbation { ReorderAttributes, InsertSiblingBefore };

/// Re-serializes the snapshot with one perturbation applied around `target`:
/// every element's attributes reversed, or an empty element with class
/// "promo" inserted right before it. Returns nullopt where an inserted
/// sibling would be moved by the parser (document scaffolding, head).
std::optional<std::string> perturb(const dom::DomSnapshot& snapshot, dom::NodeIndex target, Perturbation kind);

/// Where `target` lands in the perturbed snapshot, found by document order.
std::string perturbed_node_id(const dom::DomSnapshot& original, const dom::DomSnapshot& perturbed,
                              dom::NodeIndex target, Perturbation kind);

}  // namespace teachflow::testing
