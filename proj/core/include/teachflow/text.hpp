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

namespace teachflow::text {

std::string trim(std::string_view s);
/// Trims and folds every run of ASCII whitespace into a single space.
std::string collapse_ws(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool ends_with_ci(std::string_view s, std::string_view suffix);
std::string slugify(std::string_view s);
bool is_valid_utf8(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace teachflow::text
