// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <cstdlib>

#include "generator.hpp"
#include "isomorphism.hpp"
#include "merge_properties.hpp"
#include "replay_oracle.hpp"

namespace teachflow {
namespace {

std::size_t case_count() {
  if (const char* v = std::getenv("TEACHFLOW_PROPERTY_CASES")) return std::strtoull(v, nullptr, 10);
  return 1000;
}

TEST(MergeProperties, RandomFamiliesSatisfyAllProperties) {
  const auto run = testing::run_merge_properties(case_count(), 7001);
  EXPECT_EQ(run.cases, case_count());
  EXPECT_GT(run.scenarios, 2 * run.cases);
  EXPECT_GT(run.injectedConflicts, run.cases);
  for (std::size_t i = 0; i < std::min<std::size_t>(run.failures.size(), 10); ++i) {
    const auto& f = run.failures[i];
    ADD_FAILURE() << "seed " << f.seed << " " << testing::to_string(f.property) << ": " << f.detail;
  }
  EXPECT_TRUE(run.failures.empty()) << run.failures.size() << " failures";
}

TEST(MergeProperties, GeneratorIsDeterministic) {
  for (std::uint64_t seed : {1u, 99u, 123456u}) {
    auto a = testing::generate_family(seed);
    auto b = testing::generate_family(seed);
    EXPECT_EQ(a.scenarios, b.scenarios);
    EXPECT_EQ(a.observed, b.observed);
  }
}

TEST(MergeProperties, DeeperFamiliesStillReplay) {
  testing::GeneratorOptions opts;
  opts.maxDepth = 5;
  opts.maxScenarios = 24;
  testing::PropertyRun run;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::check_family(testing::generate_family(90000 + seed, opts), run);
  }
  EXPECT_TRUE(run.failures.empty()) << (run.failures.empty() ? "" : run.failures.front().detail);
}

}  // namespace
}  // namespace teachflow
