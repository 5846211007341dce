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

namespace teachflow::csv {

using Record = std::vector<std::string>;

/// RFC 4180: comma separated, optional double-quoted fields with "" escapes
/// and embedded line breaks, CRLF or LF record ends. A UTF-8 BOM is skipped.
/// Throws Error(MalformedCsv).
std::vector<Record> parse(std::string_view bytes);

/// Quotes a field only when it contains a comma, quote or line break.
std::string write(const std::vector<Record>& records);

}  // namespace teachflow::csv
