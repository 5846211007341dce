// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/runtime/template.hpp"

#include <vector>

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::runtime {

namespace {

using nlohmann::json;

struct Frame {
  const json* value;
  long index;  // -1 outside arrays
};

std::string escape_html(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

const json* lookup_in(const json& v, std::string_view dotted) {
  const json* cur = &v;
  std::size_t pos = 0;
  while (pos <= dotted.size()) {
    auto dot = dotted.find('.', pos);
    auto part = dotted.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(std::string(part));
    if (it == cur->end()) return nullptr;
    cur = &*it;
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return cur;
}

const json* lookup(const std::vector<Frame>& stack, std::string_view name) {
  if (name == ".") return stack.back().value;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    if (const auto* v = lookup_in(*it->value, name)) return v;
  }
  return nullptr;
}

bool truthy(const json* v) {
  if (!v || v->is_null()) return false;
  if (v->is_boolean()) return v->get<bool>();
  if (v->is_array() || v->is_object() || v->is_string()) return !v->empty() && !(v->is_string() && v->get<std::string>().empty());
  if (v->is_number()) return v->get<double>() != 0.0;
  return true;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

class Renderer {
 public:
  explicit Renderer(std::string_view tmpl) : t_(tmpl) {}

  std::string run(const json& ctx) {
    std::vector<Frame> stack{{&ctx, -1}};
    std::string out;
    std::size_t pos = 0;
    render(pos, "", stack, out, true);
    return out;
  }

 private:
  // Renders until the closing tag of `section` (or the end for the top level).
  void render(std::size_t& pos, const std::string& section, std::vector<Frame>& stack, std::string& out,
              bool emit) {
    while (pos < t_.size()) {
      auto open = t_.find("{{", pos);
      if (open == std::string_view::npos) {
        if (emit) out.append(t_.substr(pos));
        pos = t_.size();
        break;
      }
      if (emit) out.append(t_.substr(pos, open - pos));
      auto close = t_.find("}}", open + 2);
      if (close == std::string_view::npos) throw Error(ErrorCode::InvalidAppSpec, "unterminated template tag");
      const auto tag = text::trim(t_.substr(open + 2, close - open - 2));
      pos = close + 2;
      if (tag.empty()) continue;
      const char sigil = tag[0];
      if (sigil == '/') {
        if (text::trim(tag.substr(1)) != section) {
          throw Error(ErrorCode::InvalidAppSpec, "unexpected closing tag {{" + tag + "}}");
        }
        return;
      }
      if (sigil == '#' || sigil == '^') {
        const auto name = text::trim(tag.substr(1));
        const json* v = emit ? lookup(stack, name) : nullptr;
        const std::size_t bodyStart = pos;
        if (sigil == '^' || !emit) {
          render(pos, name, stack, out, emit && !truthy(v) && sigil == '^');
          continue;
        }
        if (!truthy(v)) {
          render(pos, name, stack, out, false);
          continue;
        }
        if (v->is_array()) {
          long idx = 0;
          for (const auto& item : *v) {
            pos = bodyStart;
            stack.push_back({&item, idx++});
            render(pos, name, stack, out, true);
            stack.pop_back();
          }
        } else {
          stack.push_back({v->is_object() ? v : stack.back().value, stack.back().index});
          render(pos, name, stack, out, true);
          stack.pop_back();
        }
        continue;
      }
      if (!emit) continue;
      if (tag == "@index") {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          if (it->index >= 0) {
            out += std::to_string(it->index);
            break;
          }
        }
        continue;
      }
      if (const json* v = lookup(stack, tag)) out += escape_html(scalar_text(*v));
    }
    if (!section.empty()) throw Error(ErrorCode::InvalidAppSpec, "unclosed section {{#" + section + "}}");
  }

  std::string_view t_;
};

}  // namespace

std::string render_template(std::string_view tmpl, const nlohmann::json& context) {
  return Renderer(tmpl).run(context);
}

}  // namespace teachflow::runtime
