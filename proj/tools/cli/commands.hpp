// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "teachflow/model/normalize.hpp"
#include "teachflow/runtime/simapp.hpp"

namespace teachflow::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2 };

/// Entry point shared by the teachflow binary and the tests.
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Index of the sample row whose cells the trace types most often (first on
/// ties); 0 when nothing matches.
std::size_t infer_row(const std::vector<model::ActionEvent>& events, const model::SnapshotStore& snapshots,
                      const model::SampleTable& table);

struct Recording {
  std::vector<model::ActionEvent> events;
  std::map<std::string, std::string> snapshots;  // ref -> html
};

/// Plays a gesture script against a simulated app and captures the trace a
/// browser recorder would produce. Gestures are objects with one verb:
/// {"click": css} {"type": css, "text": t} {"extract": css} {"focus"|"hover"|"scroll": css}
/// {"select": css, "object": ref} {"assert": ref, "state": s, "at"?: css} {"decide": d}
Recording record_gestures(const runtime::SimAppSpec& app, const nlohmann::json& script);

}  // namespace teachflow::cli
