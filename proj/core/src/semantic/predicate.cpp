// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include "teachflow/semantic/predicate.hpp"

#include <cctype>

#include "teachflow/dom/query.hpp"
#include "teachflow/error.hpp"

namespace teachflow::semantic {

namespace {

struct Token {
  enum class Kind { Ident, String, Int, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  long long number = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size()) {
      tok_ = Token{Token::Kind::End, "", 0};
      return;
    }
    char c = s_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
        id.push_back(s_[i_++]);
      }
      tok_ = Token{Token::Kind::Ident, id, 0};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
      std::string num(1, c);
      ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) num.push_back(s_[i_++]);
      if (num.size() > 18) fail("integer literal out of range");
      tok_ = Token{Token::Kind::Int, num, std::stoll(num)};
      return;
    }
    if (c == '"') {
      std::string out;
      ++i_;
      while (true) {
        if (i_ >= s_.size()) fail("unterminated string literal");
        char d = s_[i_++];
        if (d == '"') break;
        if (d == '\\') {
          if (i_ >= s_.size()) fail("unterminated escape");
          out.push_back(s_[i_++]);
          continue;
        }
        out.push_back(d);
      }
      tok_ = Token{Token::Kind::String, out, 0};
      return;
    }
    static constexpr std::string_view kTwo[] = {"==", "!=", "<=", ">="};
    for (auto op : kTwo) {
      if (s_.substr(i_, 2) == op) {
        i_ += 2;
        tok_ = Token{Token::Kind::Symbol, std::string(op), 0};
        return;
      }
    }
    if (std::string_view("(),;:<>").find(c) != std::string_view::npos) {
      ++i_;
      tok_ = Token{Token::Kind::Symbol, std::string(1, c), 0};
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

 public:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::InvalidPredicate,
                "predicate: " + why + " at offset " + std::to_string(i_));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) {}

  std::vector<StateCase> cases() {
    std::vector<StateCase> out;
    while (lex_.peek().kind != Token::Kind::End) {
      keyword("case");
      auto state = string_lit();
      keyword("when");
      auto cond = expr();
      if (is_symbol(";")) lex_.take();
      for (const auto& c : out) {
        if (c.state == state) lex_.fail("duplicate case for state \"" + state + "\"");
      }
      out.push_back({state, std::move(cond)});
    }
    if (out.empty()) lex_.fail("predicate has no cases");
    return out;
  }

 private:
  bool is_symbol(std::string_view s) const {
    return lex_.peek().kind == Token::Kind::Symbol && lex_.peek().text == s;
  }
  bool is_ident(std::string_view s) const {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
  }
  void symbol(std::string_view s) {
    if (!is_symbol(s)) lex_.fail("expected '" + std::string(s) + "'");
    lex_.take();
  }
  void keyword(std::string_view s) {
    if (!is_ident(s)) lex_.fail("expected '" + std::string(s) + "'");
    lex_.take();
  }
  std::string string_lit() {
    if (lex_.peek().kind != Token::Kind::String) lex_.fail("expected string literal");
    return lex_.take().text;
  }
  std::string selector_lit() {
    auto s = string_lit();
    try {
      dom::Query::parse(s);
    } catch (const Error& e) {
      lex_.fail(e.what());
    }
    return s;
  }

  BoolExpr expr() {
    auto lhs = conj();
    if (!is_ident("or")) return lhs;
    BoolExpr e;
    e.kind = BoolExpr::Kind::Or;
    e.operands.push_back(std::move(lhs));
    while (is_ident("or")) {
      lex_.take();
      e.operands.push_back(conj());
    }
    return e;
  }

  BoolExpr conj() {
    auto lhs = unary();
    if (!is_ident("and")) return lhs;
    BoolExpr e;
    e.kind = BoolExpr::Kind::And;
    e.operands.push_back(std::move(lhs));
    while (is_ident("and")) {
      lex_.take();
      e.operands.push_back(unary());
    }
    return e;
  }

  BoolExpr unary() {
    if (is_ident("not")) {
      lex_.take();
      BoolExpr e;
      e.kind = BoolExpr::Kind::Not;
      e.operands.push_back(unary());
      return e;
    }
    return primary();
  }

  BoolExpr primary() {
    if (is_symbol("(")) {
      lex_.take();
      auto e = expr();
      symbol(")");
      return e;
    }
    BoolExpr e;
    const auto& t = lex_.peek();
    if (t.kind == Token::Kind::Int || (t.kind == Token::Kind::Ident && t.text == "rowCount")) {
      e.kind = BoolExpr::Kind::Compare;
      e.lhs = term();
      e.op = cmp_op();
      e.rhs = term();
      return e;
    }
    if (t.kind != Token::Kind::Ident) lex_.fail("expected expression");
    auto name = lex_.take().text;
    if (name == "true") {
      e.kind = BoolExpr::Kind::True;
    } else if (name == "false") {
      e.kind = BoolExpr::Kind::False;
    } else if (name == "exists") {
      e.kind = BoolExpr::Kind::Exists;
      symbol("(");
      e.selector = selector_lit();
      symbol(")");
    } else if (name == "textContains") {
      e.kind = BoolExpr::Kind::TextContains;
      symbol("(");
      e.selector = selector_lit();
      symbol(",");
      e.arg1 = string_lit();
      symbol(")");
    } else if (name == "attrEquals") {
      e.kind = BoolExpr::Kind::AttrEquals;
      symbol("(");
      e.selector = selector_lit();
      symbol(",");
      e.arg1 = string_lit();
      symbol(",");
      e.arg2 = string_lit();
      symbol(")");
    } else {
      lex_.fail("undefined primitive '" + name + "'");
    }
    return e;
  }

  IntTerm term() {
    IntTerm t;
    if (lex_.peek().kind == Token::Kind::Int) {
      t.kind = IntTerm::Kind::Literal;
      t.value = lex_.take().number;
      return t;
    }
    keyword("rowCount");
    symbol("(");
    t.kind = IntTerm::Kind::RowCount;
    t.selector = selector_lit();
    symbol(")");
    return t;
  }

  CmpOp cmp_op() {
    if (lex_.peek().kind != Token::Kind::Symbol) lex_.fail("expected comparison operator");
    auto op = lex_.take().text;
    if (op == "==") return CmpOp::Eq;
    if (op == "!=") return CmpOp::Ne;
    if (op == "<") return CmpOp::Lt;
    if (op == "<=") return CmpOp::Le;
    if (op == ">") return CmpOp::Gt;
    if (op == ">=") return CmpOp::Ge;
    lex_.fail("expected comparison operator");
  }

  Lexer lex_;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + '"';
}

std::string print_term(const IntTerm& t) {
  if (t.kind == IntTerm::Kind::Literal) return std::to_string(t.value);
  return "rowCount(" + quote(t.selector) + ")";
}

std::string print(const BoolExpr& e, bool nested) {
  auto join = [&](std::string_view op) {
    std::string out;
    for (std::size_t i = 0; i < e.operands.size(); ++i) {
      if (i) out += " " + std::string(op) + " ";
      out += print(e.operands[i], true);
    }
    return nested ? "(" + out + ")" : out;
  };
  switch (e.kind) {
    case BoolExpr::Kind::True: return "true";
    case BoolExpr::Kind::False: return "false";
    case BoolExpr::Kind::And: return join("and");
    case BoolExpr::Kind::Or: return join("or");
    case BoolExpr::Kind::Not: return "not " + print(e.operands.front(), true);
    case BoolExpr::Kind::Exists: return "exists(" + quote(e.selector) + ")";
    case BoolExpr::Kind::TextContains:
      return "textContains(" + quote(e.selector) + ", " + quote(e.arg1) + ")";
    case BoolExpr::Kind::AttrEquals:
      return "attrEquals(" + quote(e.selector) + ", " + quote(e.arg1) + ", " + quote(e.arg2) + ")";
    case BoolExpr::Kind::Compare: {
      static constexpr std::string_view kOps[] = {"==", "!=", "<", "<=", ">", ">="};
      return print_term(e.lhs) + " " + std::string(kOps[static_cast<int>(e.op)]) + " " +
             print_term(e.rhs);
    }
  }
  return "false";
}

struct Evaluator {
  const dom::DomSnapshot& s;
  std::optional<dom::NodeIndex> anchor;

  std::vector<dom::NodeIndex> select(const std::string& sel) const {
    if (!anchor) return {};
    return dom::Query::parse(sel).select(s, *anchor);
  }

  long long term(const IntTerm& t) const {
    if (t.kind == IntTerm::Kind::Literal) return t.value;
    return static_cast<long long>(select(t.selector).size());
  }

  bool eval(const BoolExpr& e) const {
    switch (e.kind) {
      case BoolExpr::Kind::True: return true;
      case BoolExpr::Kind::False: return false;
      case BoolExpr::Kind::And:
        for (const auto& o : e.operands) {
          if (!eval(o)) return false;
        }
        return true;
      case BoolExpr::Kind::Or:
        for (const auto& o : e.operands) {
          if (eval(o)) return true;
        }
        return false;
      case BoolExpr::Kind::Not: return !eval(e.operands.front());
      case BoolExpr::Kind::Exists: return !select(e.selector).empty();
      case BoolExpr::Kind::TextContains:
        for (auto i : select(e.selector)) {
          if (s.node(i).textContent.find(e.arg1) != std::string::npos) return true;
        }
        return false;
      case BoolExpr::Kind::AttrEquals:
        for (auto i : select(e.selector)) {
          const auto* v = s.node(i).attr(e.arg1);
          if (v && *v == e.arg2) return true;
        }
        return false;
      case BoolExpr::Kind::Compare: {
        auto a = term(e.lhs);
        auto b = term(e.rhs);
        switch (e.op) {
          case CmpOp::Eq: return a == b;
          case CmpOp::Ne: return a != b;
          case CmpOp::Lt: return a < b;
          case CmpOp::Le: return a <= b;
          case CmpOp::Gt: return a > b;
          case CmpOp::Ge: return a >= b;
        }
      }
    }
    return false;
  }
};

}  // namespace

StatePredicate StatePredicate::parse(std::string_view source) {
  return StatePredicate(Parser(source).cases());
}

std::string StatePredicate::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    if (i) out += "\n";
    out += "case " + quote(cases_[i].state) + " when " + print(cases_[i].condition, false) + ";";
  }
  return out;
}

std::string StatePredicate::evaluate(const dom::DomSnapshot& snapshot,
                                     std::optional<dom::NodeIndex> anchor) const {
  Evaluator ev{snapshot, anchor};
  for (const auto& c : cases_) {
    if (ev.eval(c.condition)) return c.state;
  }
  return std::string(kUnknownState);
}

std::set<std::string> StatePredicate::states() const {
  std::set<std::string> out;
  for (const auto& c : cases_) out.insert(c.state);
  return out;
}

}  // namespace teachflow::semantic
