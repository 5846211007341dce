// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>

#include "teachflow/dom/snapshot.hpp"

namespace teachflow::dom {

enum class LabelSource { LabelFor, AriaLabel, Placeholder, Proximity, OwnText, Fallback };

struct Label {
  std::string text;
  LabelSource source = LabelSource::Fallback;
};

/// Human-readable name of an element. Rules, first non-empty wins:
///   1. `<label for=...>` referencing the element's id (same scope)
///   2. aria-label
///   3. placeholder
///   4. preceding text of the element, its parent or grandparent siblings
///   5. own text content
///   6. "<tag> element"
/// Self-describing elements (buttons, links, headings, ...) try 5 before 4.
/// Rule 4 is skipped for empty elements other than form controls.
Label associate_label(const DomSnapshot& snapshot, NodeIndex node);
std::string associate_label(const DomSnapshot& snapshot, std::string_view nodeId);

}  // namespace teachflow::dom
