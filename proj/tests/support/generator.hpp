// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "replay_oracle.hpp"
#include "teachflow/model/types.hpp"

namespace teachflow::testing {

/// Scenarios read off one randomly drawn decision tree, so the family is
/// conflict-free by construction. At each branch the else-paths either all
/// skip the condition or all assert the same complement, and observed
/// states on else-paths avoid every explicit arm and the complement.
struct SyntheticFamily {
  std::uint64_t seed = 0;
  model::SampleTable table;
  std::vector<model::Scenario> scenarios;
  std::vector<ObservedStates> observed;  // parallel to scenarios
};

struct GeneratorOptions {
  int maxDepth = 3;
  int maxPrefix = 3;
  std::size_t maxScenarios = 12;
};

SyntheticFamily generate_family(std::uint64_t seed, const GeneratorOptions& options = {});

/// Variants of family members that cannot merge into the family's program:
/// a relabeled first step, a flipped decision, an extra step before the end,
/// and a changed step right after a positive condition. Only the kinds the
/// family's shape allows are produced.
std::vector<model::Scenario> conflicting_variants(const SyntheticFamily& family, std::mt19937_64& rng);

}  // namespace teachflow::testing
