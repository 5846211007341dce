// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/error.hpp"

namespace teachflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::DanglingSnapshotRef: return "DanglingSnapshotRef";
    case ErrorCode::KindFieldMismatch: return "KindFieldMismatch";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::GuardFailed: return "GuardFailed";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::UnparseableInput: return "UnparseableInput";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::ElementNotFound: return "ElementNotFound";
    case ErrorCode::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::NoSemanticMatch: return "NoSemanticMatch";
    case ErrorCode::OracleUnreachable: return "OracleUnreachable";
    case ErrorCode::MalformedOracleResponse: return "MalformedOracleResponse";
    case ErrorCode::InvalidPredicate: return "InvalidPredicate";
    case ErrorCode::InvalidCatalog: return "InvalidCatalog";
    case ErrorCode::InconsistentProgram: return "InconsistentProgram";
    case ErrorCode::MalformedProgram: return "MalformedProgram";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::TransitionMissing: return "TransitionMissing";
    case ErrorCode::UnmatchedState: return "UnmatchedState";
    case ErrorCode::InvalidAppSpec: return "InvalidAppSpec";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorCode parse_error_code(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Io); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return ErrorCode::Io;
}

}  // namespace teachflow
