// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>

#include "teachflow/model/types.hpp"

namespace teachflow::params {

struct BindingContext {
  const model::InputSchema& schema;
  const model::Row& activeRow;
};

/// ColumnRef of the leftmost column whose trimmed cell equals the trimmed
/// value, otherwise Literal(typed).
model::ParameterBinding map_value(std::string_view typed, const BindingContext& ctx);

/// Throws MissingColumn when a ColumnRef names no schema column.
std::string bind_value(const model::ParameterBinding& binding, const BindingContext& ctx);

}  // namespace teachflow::params
