// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "generator.hpp"

namespace teachflow::testing {

enum class MergeProperty { ReplayFidelity, OrderInsensitivity, Idempotence, CoverageMonotonicity, Atomicity };

std::string to_string(MergeProperty p);

struct PropertyFailure {
  std::uint64_t seed = 0;
  MergeProperty property = MergeProperty::ReplayFidelity;
  std::string detail;
};

struct PropertyRun {
  std::size_t cases = 0;
  std::size_t scenarios = 0;
  std::size_t injectedConflicts = 0;
  std::vector<PropertyFailure> failures;
};

/// Checks every merge property on one generated family.
void check_family(const SyntheticFamily& family, PropertyRun& run, std::size_t permutations = 3);

/// Families drawn from seeds base, base+1, ... base+cases-1.
PropertyRun run_merge_properties(std::size_t cases, std::uint64_t baseSeed);

}  // namespace teachflow::testing
