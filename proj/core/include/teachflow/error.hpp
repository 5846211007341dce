// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teachflow {

enum class ErrorCode {
  // model
  MalformedCsv,
  DuplicateColumn,
  EmptyTable,
  InvalidSchema,
  DanglingSnapshotRef,
  KindFieldMismatch,
  MalformedTrace,
  GuardFailed,
  InvalidScenario,
  // dom
  UnparseableInput,
  UnknownNode,
  ElementNotFound,
  AmbiguousMatch,
  InvalidQuery,
  // semantic
  NoSemanticMatch,
  OracleUnreachable,
  MalformedOracleResponse,
  InvalidPredicate,
  InvalidCatalog,
  // synthesis
  InconsistentProgram,
  MalformedProgram,
  // params
  MissingColumn,
  // runtime
  TransitionMissing,
  UnmatchedState,
  InvalidAppSpec,
  // service
  DuplicateName,
  NotFound,
  BadRequest,
  Conflict,
  Io,
};

std::string_view to_string(ErrorCode code);
/// Inverse of to_string; Io for unknown names.
ErrorCode parse_error_code(std::string_view name);

/// Every failure raised by the library carries one of the codes above so
/// callers (HTTP layer, CLI) can map it onto a status or exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace teachflow
