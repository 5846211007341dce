// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace teachflow::runtime {

/// Logic-less templates: {{name}} and {{a.b}} insert HTML-escaped values,
/// {{#name}}...{{/name}} repeats over arrays or enters objects and truthy
/// values, {{^name}}...{{/name}} renders when the value is missing, false or
/// empty, and {{@index}} is the current array position.
/// Throws InvalidAppSpec on unbalanced sections.
std::string render_template(std::string_view tmpl, const nlohmann::json& context);

}  // namespace teachflow::runtime
