// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/params/binding.hpp"

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::params {

model::ParameterBinding map_value(std::string_view typed, const BindingContext& ctx) {
  const auto needle = text::trim(typed);
  if (!needle.empty()) {
    for (const auto& column : ctx.schema.columns) {
      auto it = ctx.activeRow.find(column);
      if (it != ctx.activeRow.end() && text::trim(it->second) == needle) return model::ColumnRef{column};
    }
  }
  return model::Literal{std::string(typed)};
}

std::string bind_value(const model::ParameterBinding& binding, const BindingContext& ctx) {
  if (const auto* lit = std::get_if<model::Literal>(&binding)) return lit->text;
  const auto& column = std::get<model::ColumnRef>(binding).column;
  auto it = ctx.activeRow.find(column);
  if (!ctx.schema.has_column(column) || it == ctx.activeRow.end()) {
    throw Error(ErrorCode::MissingColumn, "no input column named " + column);
  }
  return text::trim(it->second);
}

}  // namespace teachflow::params
