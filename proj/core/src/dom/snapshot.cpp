// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/dom/snapshot.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "teachflow/error.hpp"
#include "teachflow/text.hpp"

namespace teachflow::dom {

const std::string* Node::attr(std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

DomSnapshot::DomSnapshot(std::string id, std::string sourceHtml, std::vector<Node> nodes)
    : id_(std::move(id)), source_(std::move(sourceHtml)), nodes_(std::move(nodes)) {
  for (NodeIndex i = 0; i < nodes_.size(); ++i) byId_.emplace(nodes_[i].nodeId, i);
}

DomSnapshot DomSnapshot::with_id(std::string id) const {
  DomSnapshot copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

std::optional<NodeIndex> DomSnapshot::find(std::string_view nodeId) const {
  auto it = byId_.find(nodeId);
  if (it == byId_.end()) return std::nullopt;
  return it->second;
}

NodeIndex DomSnapshot::index_of(std::string_view nodeId) const {
  if (auto i = find(nodeId)) return *i;
  throw Error(ErrorCode::UnknownNode,
              "node '" + std::string(nodeId) + "' not in snapshot '" + id_ + "'");
}

std::vector<NodeIndex> DomSnapshot::element_children(NodeIndex i) const {
  std::vector<NodeIndex> out;
  for (auto c : nodes_.at(i).children) {
    if (nodes_[c].is_element()) out.push_back(c);
  }
  return out;
}

std::vector<NodeIndex> DomSnapshot::elements() const {
  std::vector<NodeIndex> out;
  // Arena order is document order: the parser appends in preorder.
  for (NodeIndex i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].is_element()) out.push_back(i);
  }
  return out;
}

bool DomSnapshot::is_scope_root(NodeIndex i) const {
  if (i == 0) return true;
  const auto& n = nodes_.at(i);
  if (n.tag != "template") return false;
  return n.attr("shadowrootmode") != nullptr || n.attr("shadowroot") != nullptr;
}

NodeIndex DomSnapshot::scope_root(NodeIndex i) const {
  const auto& scope = nodes_.at(i).scopeId;
  if (scope.empty()) return 0;
  return index_of(scope);
}

std::vector<NodeIndex> DomSnapshot::elements_in_scope(NodeIndex scopeRoot) const {
  const std::string inner = scopeRoot == 0 ? std::string() : nodes_.at(scopeRoot).nodeId;
  std::vector<NodeIndex> out;
  for (NodeIndex i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].is_element() && nodes_[i].scopeId == inner && contains(scopeRoot, i) &&
        i != scopeRoot) {
      out.push_back(i);
    }
  }
  return out;
}

bool DomSnapshot::contains(NodeIndex ancestor, NodeIndex node) const {
  std::optional<NodeIndex> cur = node;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = nodes_[*cur].parent;
  }
  return false;
}

bool is_void_element(std::string_view tag) {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base", "br", "col", "embed", "hr", "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

namespace {

bool is_raw_text(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "textarea" || tag == "title";
}

bool drops_content(std::string_view tag) { return tag == "script" || tag == "style"; }

bool closes_paragraph(std::string_view tag) {
  static constexpr std::array<std::string_view, 26> kBlock = {
      "address", "article", "aside", "blockquote", "details", "div", "dl", "fieldset",
      "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr",
      "main", "nav", "ol", "p", "section", "table", "ul"};
  return std::find(kBlock.begin(), kBlock.end(), tag) != kBlock.end();
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    std::string decoded;
    if (!name.empty() && name[0] == '#') {
      unsigned long cp = 0;
      bool ok = name.size() > 1;
      bool hex = ok && (name[1] == 'x' || name[1] == 'X');
      for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        auto c = static_cast<unsigned char>(name[k]);
        if (hex ? !std::isxdigit(c) : !std::isdigit(c)) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) +
             (std::isdigit(c) ? c - '0' : (std::tolower(c) - 'a' + 10));
      }
      if (ok && (!hex || name.size() > 2)) append_utf8(decoded, cp);
    } else if (name == "amp") {
      decoded = "&";
    } else if (name == "lt") {
      decoded = "<";
    } else if (name == "gt") {
      decoded = ">";
    } else if (name == "quot") {
      decoded = "\"";
    } else if (name == "apos") {
      decoded = "'";
    } else if (name == "nbsp") {
      decoded = " ";
    }
    if (decoded.empty()) {
      out.push_back('&');
      continue;
    }
    out += decoded;
    i = semi;
  }
  return out;
}

struct RawElement {
  std::string tag;
  std::vector<Attribute> attributes;
  std::vector<std::size_t> children;  // into RawTree::items
  std::string text;
  bool isText = false;
};

class TreeBuilder {
 public:
  TreeBuilder() {
    items_.push_back(RawElement{"#document", {}, {}, {}, false});
    stack_.push_back(0);
  }

  void text(std::string t) {
    if (t.empty()) return;
    auto& parent = items_[stack_.back()];
    if (!parent.children.empty() && items_[parent.children.back()].isText) {
      items_[parent.children.back()].text += t;
      return;
    }
    items_.push_back(RawElement{"#text", {}, {}, std::move(t), true});
    items_[stack_.back()].children.push_back(items_.size() - 1);
  }

  void start(std::string tag, std::vector<Attribute> attrs, bool selfClosing) {
    apply_implied_end(tag);
    items_.push_back(RawElement{tag, std::move(attrs), {}, {}, false});
    auto idx = items_.size() - 1;
    items_[stack_.back()].children.push_back(idx);
    if (!selfClosing && !is_void_element(tag)) stack_.push_back(idx);
  }

  void end(const std::string& tag) {
    for (std::size_t k = stack_.size(); k-- > 1;) {
      if (items_[stack_[k]].tag == tag) {
        stack_.resize(k);
        return;
      }
      // Never close past a shadow root boundary on a stray end tag.
      if (items_[stack_[k]].tag == "template") return;
    }
  }

  std::vector<RawElement>& items() { return items_; }

 private:
  bool open_until(std::string_view tag, std::initializer_list<std::string_view> barriers,
                  std::size_t& pos) const {
    for (std::size_t k = stack_.size(); k-- > 1;) {
      const auto& t = items_[stack_[k]].tag;
      if (t == tag) {
        pos = k;
        return true;
      }
      for (auto b : barriers) {
        if (t == b) return false;
      }
    }
    return false;
  }

  void close_if_open(std::string_view tag, std::initializer_list<std::string_view> barriers) {
    std::size_t pos = 0;
    if (open_until(tag, barriers, pos)) stack_.resize(pos);
  }

  void apply_implied_end(std::string_view tag) {
    if (closes_paragraph(tag)) {
      close_if_open("p", {"div", "section", "td", "th", "li", "template", "button", "table"});
    }
    if (tag == "li") close_if_open("li", {"ul", "ol", "template"});
    if (tag == "dt" || tag == "dd") {
      close_if_open("dt", {"dl", "template"});
      close_if_open("dd", {"dl", "template"});
    }
    if (tag == "option") close_if_open("option", {"select", "datalist", "template"});
    if (tag == "td" || tag == "th") {
      close_if_open("td", {"tr", "table", "template"});
      close_if_open("th", {"tr", "table", "template"});
    }
    if (tag == "tr") {
      close_if_open("td", {"table", "template"});
      close_if_open("th", {"table", "template"});
      close_if_open("tr", {"table", "template"});
    }
    if (tag == "thead" || tag == "tbody" || tag == "tfoot") {
      close_if_open("td", {"table", "template"});
      close_if_open("th", {"table", "template"});
      close_if_open("tr", {"table", "template"});
      close_if_open("thead", {"table", "template"});
      close_if_open("tbody", {"table", "template"});
      close_if_open("tfoot", {"table", "template"});
    }
  }

  std::vector<RawElement> items_;
  std::vector<std::size_t> stack_;
};

class Tokenizer {
 public:
  Tokenizer(std::string_view src, TreeBuilder& builder) : s_(src), b_(builder) {}

  void run() {
    std::string pending;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '<' && i_ + 1 < s_.size()) {
        char n = s_[i_ + 1];
        if (n == '!' || n == '?' || n == '/' || std::isalpha(static_cast<unsigned char>(n))) {
          flush(pending);
          markup();
          continue;
        }
      }
      pending.push_back(c);
      ++i_;
    }
    flush(pending);
  }

 private:
  void flush(std::string& pending) {
    if (!pending.empty()) b_.text(decode_entities(pending));
    pending.clear();
  }

  void markup() {
    if (s_.compare(i_, 4, "<!--") == 0) {
      auto e = s_.find("-->", i_ + 4);
      i_ = e == std::string_view::npos ? s_.size() : e + 3;
      return;
    }
    if (s_[i_ + 1] == '!' || s_[i_ + 1] == '?') {
      auto e = s_.find('>', i_);
      i_ = e == std::string_view::npos ? s_.size() : e + 1;
      return;
    }
    if (s_[i_ + 1] == '/') {
      i_ += 2;
      auto name = read_name();
      auto e = s_.find('>', i_);
      i_ = e == std::string_view::npos ? s_.size() : e + 1;
      if (!name.empty()) b_.end(name);
      return;
    }
    ++i_;
    auto tag = read_name();
    std::vector<Attribute> attrs;
    bool selfClosing = false;
    while (i_ < s_.size()) {
      skip_ws();
      if (i_ >= s_.size()) break;
      if (s_[i_] == '>') {
        ++i_;
        break;
      }
      if (s_[i_] == '/') {
        selfClosing = true;
        ++i_;
        continue;
      }
      selfClosing = false;
      auto name = read_attr_name();
      if (name.empty()) {
        ++i_;
        continue;
      }
      std::string value;
      skip_ws();
      if (i_ < s_.size() && s_[i_] == '=') {
        ++i_;
        skip_ws();
        value = decode_entities(read_attr_value());
      }
      bool dup = std::any_of(attrs.begin(), attrs.end(),
                             [&](const Attribute& a) { return a.name == name; });
      if (!dup) attrs.push_back({std::move(name), std::move(value)});
    }
    b_.start(tag, std::move(attrs), selfClosing);
    if (is_raw_text(tag) && !selfClosing) {
      std::string close = "</" + tag;
      std::size_t e = i_;
      while (true) {
        e = s_.find("</", e);
        if (e == std::string_view::npos) break;
        if (text::to_lower(s_.substr(e, close.size())) == close) break;
        e += 2;
      }
      auto body = s_.substr(i_, (e == std::string_view::npos ? s_.size() : e) - i_);
      if (!drops_content(tag)) b_.text(decode_entities(body));
      if (e == std::string_view::npos) {
        i_ = s_.size();
      } else {
        auto gt = s_.find('>', e);
        i_ = gt == std::string_view::npos ? s_.size() : gt + 1;
      }
      b_.end(tag);
    }
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string read_name() {
    std::string out;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/') break;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++i_;
    }
    return out;
  }

  std::string read_attr_name() {
    std::string out;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/' || c == '=') break;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++i_;
    }
    return out;
  }

  std::string read_attr_value() {
    if (i_ >= s_.size()) return {};
    char q = s_[i_];
    if (q == '"' || q == '\'') {
      auto e = s_.find(q, i_ + 1);
      if (e == std::string_view::npos) e = s_.size();
      std::string v(s_.substr(i_ + 1, e - i_ - 1));
      i_ = std::min(e + 1, s_.size());
      return v;
    }
    std::string v;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '>') {
      v.push_back(s_[i_]);
      ++i_;
    }
    return v;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  TreeBuilder& b_;
};

struct Flattener {
  std::vector<RawElement>& raw;
  std::vector<Node> nodes;

  bool opens_scope(const RawElement& e) const {
    if (e.tag != "template") return false;
    for (const auto& a : e.attributes) {
      if (a.name == "shadowrootmode" || a.name == "shadowroot") return true;
    }
    return false;
  }

  NodeIndex emit(std::size_t rawIdx, std::optional<NodeIndex> parent, std::string nodeId,
                 const std::string& scope) {
    auto& r = raw[rawIdx];
    NodeIndex me = nodes.size();
    nodes.push_back(Node{std::move(nodeId), r.tag, r.attributes, r.text, {}, {}, parent, scope});
    std::string childScope = (me != 0 && opens_scope(r)) ? nodes[me].nodeId : scope;
    std::size_t elemIdx = 0;
    std::size_t textIdx = 0;
    std::string base = nodes[me].nodeId == "/" ? "" : nodes[me].nodeId;
    for (auto c : r.children) {
      std::string cid = raw[c].isText ? base + "/#" + std::to_string(textIdx++)
                                      : base + "/" + std::to_string(elemIdx++);
      auto ci = emit(c, me, std::move(cid), childScope);
      nodes[me].children.push_back(ci);
    }
    return me;
  }

  std::string fill_text(NodeIndex i) {
    auto& n = nodes[i];
    if (n.is_text()) {
      n.textContent = text::collapse_ws(n.text);
      return n.text;
    }
    std::string all;
    for (auto c : n.children) {
      // Shadow content does not leak into the host's light-DOM text.
      auto part = fill_text(c);
      if (nodes[c].tag == "template" && i != 0) continue;
      all += part;
    }
    n.textContent = text::collapse_ws(all);
    return all;
  }
};

}  // namespace

DomSnapshot parse_snapshot(std::string_view html, std::string id) {
  if (html.empty()) throw Error(ErrorCode::UnparseableInput, "empty HTML input");
  if (!text::is_valid_utf8(html)) {
    throw Error(ErrorCode::UnparseableInput, "input is not UTF-8 text");
  }
  TreeBuilder builder;
  Tokenizer(html, builder).run();
  Flattener flat{builder.items(), {}};
  flat.emit(0, std::nullopt, "/", "");
  flat.fill_text(0);
  return DomSnapshot(std::move(id), std::string(html), std::move(flat.nodes));
}

namespace {

std::string escape(std::string_view s, bool attr) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attr) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out.push_back(c);
    }
  }
  return out;
}

void write_node(const DomSnapshot& s, NodeIndex i, std::string& out) {
  const auto& n = s.node(i);
  if (n.is_text()) {
    out += escape(n.text, false);
    return;
  }
  bool isRoot = i == 0;
  if (!isRoot) {
    out += '<' + n.tag;
    for (const auto& a : n.attributes) out += ' ' + a.name + "=\"" + escape(a.value, true) + '"';
    out += '>';
    if (is_void_element(n.tag)) return;
  }
  for (auto c : n.children) write_node(s, c, out);
  if (!isRoot) out += "</" + n.tag + '>';
}

}  // namespace

std::string serialize(const DomSnapshot& snapshot, NodeIndex i) {
  std::string out;
  write_node(snapshot, i, out);
  return out;
}

}  // namespace teachflow::dom
