// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/csv.hpp"

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::csv {

std::vector<Record> parse(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (!text::is_valid_utf8(bytes)) throw Error(ErrorCode::MalformedCsv, "CSV is not UTF-8 text");
  std::vector<Record> out;
  Record row;
  std::string field;
  bool quoted = false;
  bool fieldStarted = false;
  bool afterQuote = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    fieldStarted = false;
    afterQuote = false;
  };
  auto end_row = [&] {
    end_field();
    out.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < bytes.size(); ++i) {
    char c = bytes[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
          afterQuote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < bytes.size() && bytes[i + 1] == '\n') ++i;
      end_row();
      ++line;
    } else if (c == '"') {
      if (fieldStarted || afterQuote) {
        throw Error(ErrorCode::MalformedCsv,
                    "stray quote on line " + std::to_string(line));
      }
      quoted = true;
      fieldStarted = true;
    } else {
      if (afterQuote) {
        throw Error(ErrorCode::MalformedCsv,
                    "text after closing quote on line " + std::to_string(line));
      }
      field.push_back(c);
      fieldStarted = true;
    }
  }
  if (quoted) throw Error(ErrorCode::MalformedCsv, "unterminated quoted field");
  if (fieldStarted || afterQuote || !row.empty()) end_row();
  return out;
}

std::string write(const std::vector<Record>& records) {
  std::string out;
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out.push_back(',');
      const auto& f = r[i];
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
        continue;
      }
      out.push_back('"');
      for (char c : f) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace teachflow::csv
