// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <sstream>

#include "teachflow/error.hpp"
#include "teachflow/synthesis/program.hpp"

namespace teachflow::synthesis {

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string to_dot(const AutomationProgram& p) {
  std::ostringstream out;
  out << "digraph automation {\n";
  out << "  rankdir=TB;\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (const auto& id : p.preorder()) {
    const auto& n = p.node(id);
    out << "  " << n.id << " [";
    switch (n.kind) {
      case NodeKind::Linear:
        out << "shape=box, label=" << dot_quote(n.step->label);
        break;
      case NodeKind::Branch:
        out << "shape=diamond, style=filled, fillcolor=\"#e6dcf5\", label=" << dot_quote(n.label);
        break;
      case NodeKind::Leaf:
        out << "shape=box, style=\"rounded,filled\", fillcolor=\"#d4f0d4\", label=" << dot_quote(*n.decision);
        break;
      case NodeKind::ExtractLeaf:
        out << "shape=oval, label=\"end\"";
        break;
    }
    out << "];\n";
  }
  for (const auto& id : p.preorder()) {
    const auto& n = p.node(id);
    if (n.kind == NodeKind::Linear) {
      out << "  " << n.id << " -> " << n.next << ";\n";
    } else if (n.kind == NodeKind::Branch) {
      for (const auto& [state, next] : n.arms) {
        out << "  " << n.id << " -> " << next << " [label=" << dot_quote(state) << "];\n";
      }
      if (n.elseArm) out << "  " << n.id << " -> " << n.elseArm->next << " [label=\"other\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_map(const AutomationProgram& program, MapFormat format) {
  if (format == MapFormat::Dot) return to_dot(program);
  return nlohmann::json(program).dump(2) + "\n";
}

AutomationProgram import_map(std::string_view text) {
  AutomationProgram p;
  try {
    p = nlohmann::json::parse(text).get<AutomationProgram>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedProgram, e.what());
  }
  check_program(p);
  return p;
}

}  // namespace teachflow::synthesis
