/*
 * Copyright 2026 The fvn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cctype>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fvn/error.hpp"
#include "fvn/matrix.hpp"

namespace fvn {

/// k-valued logical expression. Values are carried as 0-based delta indices:
/// index 0 is delta_k^1 (the top value, "true" for k = 2) and index k-1 is
/// the bottom value.
struct Expr {
  enum class Kind { Var, Const, Not, And, Or, Implies, Iff, Xor, Table };

  Kind kind = Kind::Const;
  std::string name;           // Var
  Index value = 0;            // Const: 0-based delta index
  std::vector<Index> table;   // Table: 0-based delta index per argument combination
  std::vector<Expr> args;

  static Expr var(std::string n) {
    Expr e;
    e.kind = Kind::Var;
    e.name = std::move(n);
    return e;
  }
  static Expr constant(Index delta_index0) {
    Expr e;
    e.kind = Kind::Const;
    e.value = delta_index0;
    return e;
  }
  static Expr unary(Kind k, Expr a) {
    Expr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    return e;
  }
  static Expr binary(Kind k, Expr a, Expr b) {
    Expr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }
  static Expr table_of(std::vector<Index> entries0, std::vector<Expr> a) {
    Expr e;
    e.kind = Kind::Table;
    e.table = std::move(entries0);
    e.args = std::move(a);
    return e;
  }

  bool operator==(const Expr&) const = default;
};

inline bool is_binary(Expr::Kind k) {
  using K = Expr::Kind;
  return k == K::And || k == K::Or || k == K::Implies || k == K::Iff || k == K::Xor;
}

/// Apply a primitive connective to delta indices over a k-valued domain.
/// Levels are v = k-1-index, so NOT is k-1-v, AND is min, OR is max,
/// IMPLIES is max(k-1-a, b), IFF is k-1-|a-b| and XOR is |a-b|.
inline Index apply_connective(Expr::Kind op, Index k, Index a, Index b = 0) {
  using K = Expr::Kind;
  const auto top = static_cast<long>(k) - 1;
  const long la = top - static_cast<long>(a);
  const long lb = top - static_cast<long>(b);
  long r = 0;
  switch (op) {
    case K::Not: r = top - la; break;
    case K::And: r = std::min(la, lb); break;
    case K::Or: r = std::max(la, lb); break;
    case K::Implies: r = std::max(top - la, lb); break;
    case K::Iff: r = top - std::labs(la - lb); break;
    case K::Xor: r = std::labs(la - lb); break;
    default: throw std::logic_error("apply_connective: not a connective");
  }
  return static_cast<Index>(top - r);
}

/// Direct evaluation. `lookup` maps a variable name to its 0-based delta index.
inline Index evaluate(const Expr& e, Index k, const std::function<Index(const std::string&)>& lookup) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Var: return lookup(e.name);
    case K::Const: return e.value;
    case K::Not: return apply_connective(K::Not, k, evaluate(e.args[0], k, lookup));
    case K::Table: {
      Index col = 0;
      for (const auto& a : e.args) col = col * k + evaluate(a, k, lookup);
      return e.table.at(col);
    }
    default:
      return apply_connective(e.kind, k, evaluate(e.args[0], k, lookup), evaluate(e.args[1], k, lookup));
  }
}

inline void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  for (const auto& a : e.args) collect_variables(a, out);
}

inline std::set<std::string> variables_of(const Expr& e) {
  std::set<std::string> s;
  collect_variables(e, s);
  return s;
}

/// Rename variables in place according to `f` (identity when f returns its input).
inline void rename_variables(Expr& e, const std::function<std::string(const std::string&)>& f) {
  if (e.kind == Expr::Kind::Var) e.name = f(e.name);
  for (auto& a : e.args) rename_variables(a, f);
}

// ---------------------------------------------------------------------------
// Printing

inline const char* connective_symbol(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::And: return "&";
    case K::Or: return "|";
    case K::Implies: return "->";
    case K::Iff: return "<->";
    case K::Xor: return "^";
    default: return "?";
  }
}

/// Binary sub-expressions are always parenthesized so that printing and
/// re-parsing reproduces the same tree.
inline std::string to_string(const Expr& e, Index k) {
  using K = Expr::Kind;
  auto operand = [&](const Expr& a) {
    auto s = to_string(a, k);
    return is_binary(a.kind) ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case K::Var: return e.name;
    case K::Const:
      if (k == 2) return e.value == 0 ? "true" : "false";
      return "delta(" + std::to_string(e.value + 1) + ")";
    case K::Not: return "!" + operand(e.args[0]);
    case K::Table: {
      std::string s = "table[";
      for (Index i = 0; i < e.table.size(); ++i) s += (i ? "," : "") + std::to_string(e.table[i] + 1);
      s += "](";
      for (Index i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + to_string(e.args[i], k);
      return s + ")";
    }
    default: return operand(e.args[0]) + " " + connective_symbol(e.kind) + " " + operand(e.args[1]);
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

/// Recursive-descent expression parser over one line of text.
/// Precedence (loosest first): <->, -> (right-assoc), |, ^, &, unary !.
class ExprParser {
 public:
  ExprParser(std::string_view text, Index k, std::size_t line, std::size_t column_offset)
      : s_(text), k_(k), line_(line), col0_(column_offset) {}

  Expr parse_all() {
    Expr e = parse_iff();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_ + 1); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  Expr parse_iff() {
    Expr lhs = parse_implies();
    while (eat("<->")) lhs = Expr::binary(Expr::Kind::Iff, std::move(lhs), parse_implies());
    return lhs;
  }
  Expr parse_implies() {
    Expr lhs = parse_or();
    skip_ws();
    if (s_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return Expr::binary(Expr::Kind::Implies, std::move(lhs), parse_implies());
    }
    return lhs;
  }
  Expr parse_or() {
    Expr lhs = parse_xor();
    while (eat("|")) lhs = Expr::binary(Expr::Kind::Or, std::move(lhs), parse_xor());
    return lhs;
  }
  Expr parse_xor() {
    Expr lhs = parse_and();
    while (eat("^")) lhs = Expr::binary(Expr::Kind::Xor, std::move(lhs), parse_and());
    return lhs;
  }
  Expr parse_and() {
    Expr lhs = parse_unary();
    while (eat("&")) lhs = Expr::binary(Expr::Kind::And, std::move(lhs), parse_unary());
    return lhs;
  }
  Expr parse_unary() {
    if (eat("!")) return Expr::unary(Expr::Kind::Not, parse_unary());
    return parse_atom();
  }

  Index parse_uint() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return static_cast<Index>(std::stoull(std::string(s_.substr(start, pos_ - start))));
  }

  Index parse_delta_index() {
    const auto at = pos_;
    const Index i = parse_uint();
    if (i < 1 || i > k_) {
      pos_ = at;
      skip_ws();
      fail("delta index " + std::to_string(i) + " outside [1, " + std::to_string(k_) + "]");
    }
    return i - 1;
  }

  std::string parse_ident() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected an identifier or '('");
    if (std::isdigit(static_cast<unsigned char>(s_[start]))) {
      pos_ = start;
      fail("identifiers must not start with a digit");
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr parse_atom() {
    if (eat("(")) {
      Expr e = parse_iff();
      expect(")");
      return e;
    }
    skip_ws();
    const auto ident_at = pos_;
    std::string id = parse_ident();
    if (id == "true") return Expr::constant(0);
    if (id == "false") return Expr::constant(k_ - 1);
    if (id == "delta") {
      expect("(");
      Index v = parse_delta_index();
      expect(")");
      return Expr::constant(v);
    }
    if (id == "table") {
      expect("[");
      std::vector<Index> entries;
      entries.push_back(parse_delta_index());
      while (eat(",")) entries.push_back(parse_delta_index());
      expect("]");
      expect("(");
      std::vector<Expr> args;
      args.push_back(parse_iff());
      while (eat(",")) args.push_back(parse_iff());
      expect(")");
      Index want = 1;
      for (Index i = 0; i < args.size(); ++i) want = detail::checked_mul(want, k_);
      if (entries.size() != want) {
        pos_ = ident_at;
        fail("table literal has " + std::to_string(entries.size()) + " entries, expected k^arity = " +
             std::to_string(want));
      }
      return Expr::table_of(std::move(entries), std::move(args));
    }
    return Expr::var(std::move(id));
  }

  std::string_view s_;
  Index k_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse one expression. `line`/`column_offset` position error messages
/// inside the enclosing file.
inline Expr parse_expr(std::string_view text, Index k, std::size_t line = 1, std::size_t column_offset = 0) {
  return detail::ExprParser(text, k, line, column_offset).parse_all();
}

}  // namespace fvn
