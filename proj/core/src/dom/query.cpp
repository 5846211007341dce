// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/dom/query.hpp"

#include <cctype>

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::dom {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

[[noreturn]] void fail(std::string_view sel, const std::string& why) {
  throw Error(ErrorCode::InvalidQuery, "invalid selector '" + std::string(sel) + "': " + why);
}

}  // namespace

Query Query::parse(std::string_view selector) {
  Query q;
  q.source_ = std::string(selector);
  std::size_t i = 0;
  const auto n = selector.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(selector[i]))) ++i;
  };
  auto ident = [&] {
    std::string out;
    while (i < n && ident_char(selector[i])) out.push_back(selector[i++]);
    return out;
  };

  Complex current;
  char pendingComb = ' ';
  skip_ws();
  while (i <= n) {
    if (i == n || selector[i] == ',') {
      if (current.empty()) fail(selector, "empty selector");
      q.alternatives_.push_back(std::move(current));
      current.clear();
      pendingComb = ' ';
      if (i == n) break;
      ++i;
      skip_ws();
      continue;
    }
    Compound c;
    c.combinator = pendingComb;
    bool any = false;
    if (selector[i] == '*') {
      ++i;
      any = true;
    } else if (ident_char(selector[i])) {
      c.tag = text::to_lower(ident());
      any = true;
    }
    while (i < n) {
      char ch = selector[i];
      if (ch == '#' || ch == '.') {
        ++i;
        auto v = ident();
        if (v.empty()) fail(selector, "missing name after '" + std::string(1, ch) + "'");
        c.attrs.push_back(ch == '#' ? AttrTest{"id", '=', v} : AttrTest{"class", '~', v});
        any = true;
      } else if (ch == '[') {
        ++i;
        skip_ws();
        AttrTest t;
        t.name = text::to_lower(ident());
        if (t.name.empty()) fail(selector, "missing attribute name");
        skip_ws();
        if (i < n && selector[i] != ']') {
          if (selector[i] == '=') {
            t.op = '=';
            ++i;
          } else if (i + 1 < n && selector[i + 1] == '=' &&
                     (selector[i] == '*' || selector[i] == '^' || selector[i] == '$' ||
                      selector[i] == '~')) {
            t.op = selector[i];
            i += 2;
          } else {
            fail(selector, "bad attribute operator");
          }
          skip_ws();
          if (i < n && (selector[i] == '"' || selector[i] == '\'')) {
            char quote = selector[i++];
            auto e = selector.find(quote, i);
            if (e == std::string_view::npos) fail(selector, "unterminated string");
            t.value = std::string(selector.substr(i, e - i));
            i = e + 1;
          } else {
            t.value = ident();
          }
          skip_ws();
        }
        if (i >= n || selector[i] != ']') fail(selector, "missing ']'");
        ++i;
        c.attrs.push_back(std::move(t));
        any = true;
      } else {
        break;
      }
    }
    if (!any) fail(selector, "unexpected character '" + std::string(1, selector[i]) + "'");
    current.push_back(std::move(c));
    std::size_t before = i;
    skip_ws();
    pendingComb = ' ';
    if (i < n && selector[i] == '>') {
      pendingComb = '>';
      ++i;
      skip_ws();
    } else if (i < n && selector[i] == ',') {
      continue;
    } else if (i < n && i == before) {
      fail(selector, "unexpected character '" + std::string(1, selector[i]) + "'");
    }
    if (pendingComb == '>' && (i == n || selector[i] == ',')) fail(selector, "dangling '>'");
  }
  return q;
}

bool Query::match_compound(const Node& n, const Compound& c) const {
  if (!n.is_element()) return false;
  if (!c.tag.empty() && n.tag != c.tag) return false;
  for (const auto& t : c.attrs) {
    const auto* v = n.attr(t.name);
    if (!v) return false;
    switch (t.op) {
      case 0: break;
      case '=':
        if (*v != t.value) return false;
        break;
      case '*':
        if (v->find(t.value) == std::string::npos) return false;
        break;
      case '^':
        if (v->rfind(t.value, 0) != 0) return false;
        break;
      case '$':
        if (v->size() < t.value.size() ||
            v->compare(v->size() - t.value.size(), t.value.size(), t.value) != 0)
          return false;
        break;
      case '~': {
        bool found = false;
        std::size_t p = 0;
        while (p <= v->size()) {
          auto e = v->find(' ', p);
          if (e == std::string::npos) e = v->size();
          if (v->compare(p, e - p, t.value) == 0 && e - p == t.value.size()) {
            found = true;
            break;
          }
          p = e + 1;
        }
        if (!found) return false;
        break;
      }
      default: return false;
    }
  }
  return true;
}

bool Query::match_complex(const DomSnapshot& s, NodeIndex node, const Complex& cx,
                          std::size_t pos, NodeIndex context) const {
  if (!match_compound(s.node(node), cx[pos])) return false;
  if (pos == 0) return true;
  const char comb = cx[pos].combinator;
  const auto& scope = s.node(node).scopeId;
  auto up = s.node(node).parent;
  while (up) {
    const auto& an = s.node(*up);
    if (an.scopeId != scope && *up != context) return false;
    if (match_complex(s, *up, cx, pos - 1, context)) return true;
    if (comb == '>' || *up == context) return false;
    up = an.parent;
  }
  return false;
}

bool Query::matches(const DomSnapshot& snapshot, NodeIndex node, NodeIndex context) const {
  for (const auto& cx : alternatives_) {
    if (match_complex(snapshot, node, cx, cx.size() - 1, context)) return true;
  }
  return false;
}

bool Query::matches_node(const Node& node) const {
  for (const auto& cx : alternatives_) {
    if (cx.size() == 1 && match_compound(node, cx.front())) return true;
  }
  return false;
}

std::vector<NodeIndex> Query::select(const DomSnapshot& snapshot, NodeIndex context) const {
  std::vector<NodeIndex> out;
  const auto& ctx = snapshot.node(context);
  std::string scope = snapshot.is_scope_root(context) && context != 0 ? ctx.nodeId : ctx.scopeId;
  for (auto i : snapshot.elements()) {
    if (i == context) continue;
    const auto& n = snapshot.node(i);
    if (n.scopeId != scope) continue;
    if (!snapshot.contains(context, i)) continue;
    if (matches(snapshot, i, context)) out.push_back(i);
  }
  return out;
}

}  // namespace teachflow::dom
