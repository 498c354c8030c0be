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

// Shared fixtures, reference matrices and independent oracles for the tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fvn/fvn.hpp"

namespace fvn::test {

inline std::string fixture_path(const std::string& name) { return std::string(FVN_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Network load_network(const std::string& name) { return parse_network(read_fixture(name)); }
inline RawTransitionSpec load_ts(const std::string& name) { return parse_transition_system(read_fixture(name)); }

inline Block block_named(const Network& net, const std::string& name) {
  const auto g = build_network_graph(net);
  for (const auto& d : net.blocks)
    if (d.name == name) return resolve_block(net, g, d);
  throw std::runtime_error("no block " + name);
}

inline Assr compile_block(const Network& net, const std::string& name) {
  return compile_network(extract_block(net, block_named(net, name)));
}

inline std::set<Index> node_set(const Network& net, std::initializer_list<const char*> names) {
  std::set<Index> s;
  for (auto n : names) s.insert(*net.node_index(n));
  return s;
}

inline std::vector<std::string> names_of(const Network& net, const std::vector<Index>& idx) {
  std::vector<std::string> out;
  for (Index i : idx) out.push_back(net.nodes[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Reference values printed in the source material.

// 4x8 transition matrix of the four-state example.
inline const std::vector<std::vector<int>> kFourStateL = {
    {0, 0, 0, 0, 0, 0, 0, 0},
    {1, 1, 0, 1, 0, 0, 1, 0},
    {1, 1, 0, 0, 0, 0, 1, 0},
    {0, 0, 0, 1, 0, 1, 0, 0},
};
inline const std::vector<Index> kFourStateH = {1, 2, 3, 2};

inline const std::vector<std::vector<int>> kFourStateLq = {
    {0, 0, 0, 0, 0, 0},
    {1, 1, 0, 0, 1, 1},
    {1, 1, 0, 0, 0, 1},
};

// 14-state example. Multi-successor columns as row sets.
inline const std::vector<std::vector<Index>> kFourteenStateL = {
    {10}, {2}, {12}, {12}, {}, {9}, {13}, {14}, {14}, {11}, {10, 11}, {}, {13}, {13},
    {},   {3}, {},   {},   {5, 9}, {}, {12}, {12}, {}, {12}, {12}, {11}, {14}, {14}};
inline const std::vector<Index> kFourteenStateH = {1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 4, 5, 5};
inline const std::vector<std::vector<int>> kFourteenStateLq = {
    {1, 0, 0, 0, 0, 1, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 1, 0, 0, 0},
    {1, 0, 1, 0, 0, 0, 0, 0, 1, 0},
    {1, 1, 0, 0, 0, 0, 1, 1, 0, 0},
    {0, 1, 0, 0, 1, 0, 0, 0, 0, 1},
};

// The six-node network's transition matrix.
inline const std::vector<Index> kSixNodeL = {
    35, 36, 39, 40, 34, 33, 38, 37, 51, 52, 51, 52, 58, 57, 58, 57, 33, 34, 37, 38, 36, 35,
    40, 39, 49, 50, 49, 50, 60, 59, 60, 59, 19, 20, 23, 24, 18, 17, 22, 21, 19, 20, 19, 20,
    26, 25, 26, 25, 17, 18, 21, 22, 20, 19, 24, 23, 17, 18, 17, 18, 28, 27, 28, 27};

// The block's controlled network.
inline const std::vector<Index> kBlockAL = {2,  4,  1, 3,  10, 10, 13, 13, 1, 3,  2,  4, 9,  9,  14, 14,
                                           10, 12, 9, 11, 10, 10, 13, 13, 9, 11, 10, 12, 9, 9, 14, 14};
inline const std::vector<Index> kBlockAH = {1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2};

// Block count matrix of the six-node example.
inline const std::vector<std::vector<std::uint64_t>> kBlockACounts = {{6, 6, 6, 6}, {2, 2, 2, 2}};

// The deterministic quotient of the chain block.
inline const std::vector<Index> kChainQuotient = {2, 1, 1, 2, 1, 2, 2, 1};

// T-cell block count matrices as printed.
inline std::vector<std::vector<std::uint64_t>> tcell_T1() {
  const std::vector<std::vector<std::uint64_t>> a = {
      {4, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {12, 12, 16, 16, 12, 12, 16, 16, 0, 0, 0, 0, 0, 0, 0, 0},
      {4, 4, 0, 0, 4, 4, 0, 0, 8, 8, 0, 0, 8, 8, 0, 0},
      {12, 12, 16, 16, 12, 12, 16, 16, 24, 24, 32, 32, 24, 24, 32, 32}};
  const std::vector<std::vector<std::uint64_t>> b = {
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {8, 8, 0, 0, 8, 8, 0, 0, 8, 8, 0, 0, 8, 8, 0, 0},
      {24, 24, 32, 32, 24, 24, 32, 32, 24, 24, 32, 32, 24, 24, 32, 32}};
  auto t = a;
  for (Index i = 0; i < 4; ++i) t[i].insert(t[i].end(), b[i].begin(), b[i].end());
  return t;
}

inline std::vector<std::vector<std::uint64_t>> tcell_T2_printed() {
  return {{4, 4, 4, 4, 0, 0, 0, 0, 4, 4, 4, 4, 0, 0, 0, 0},
          {28, 28, 28, 28, 0, 0, 0, 0, 28, 28, 28, 28, 0, 0, 0, 0},
          {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
          {0, 0, 0, 0, 32, 32, 32, 32, 0, 0, 0, 0, 32, 32, 32, 32}};
}

inline std::vector<std::vector<std::uint64_t>> constant_rows(const std::vector<std::uint64_t>& per_row, Index cols) {
  std::vector<std::vector<std::uint64_t>> t;
  for (auto v : per_row) t.emplace_back(cols, v);
  return t;
}

inline std::vector<std::vector<std::uint64_t>> tcell_T3() { return constant_rows({6, 2, 6, 2}, 16); }
inline std::vector<std::vector<std::uint64_t>> tcell_T4() { return constant_rows({2, 2, 2, 2, 6, 6, 6, 6}, 16); }
inline std::vector<std::vector<std::uint64_t>> tcell_T5() { return constant_rows({16, 16, 48, 48}, 16); }

/// Printed probabilistic matrices, entry strings "a/b" or "0"/"1".
inline std::vector<std::vector<std::string>> tcell_P1() {
  const std::vector<std::vector<std::string>> a = {
      {"1/8", "1/8", "0", "0", "1/8", "1/8", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
      {"3/8", "3/8", "1/2", "1/2", "3/8", "3/8", "1/2", "1/2", "0", "0", "0", "0", "0", "0", "0", "0"},
      {"1/8", "1/8", "0", "0", "1/8", "1/8", "0", "0", "1/4", "1/4", "0", "0", "1/4", "1/4", "0", "0"},
      {"3/8", "3/8", "1/2", "1/2", "3/8", "3/8", "1/2", "1/2", "3/4", "3/4", "1", "1", "3/4", "3/4", "1", "1"}};
  const std::vector<std::vector<std::string>> b = {
      {"0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
      {"0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"},
      {"1/4", "1/4", "0", "0", "1/4", "1/4", "0", "0", "1/4", "1/4", "0", "0", "1/4", "1/4", "0", "0"},
      {"3/4", "3/4", "1", "1", "3/4", "3/4", "1", "1", "3/4", "3/4", "1", "1", "3/4", "3/4", "1", "1"}};
  auto t = a;
  for (Index i = 0; i < 4; ++i) t[i].insert(t[i].end(), b[i].begin(), b[i].end());
  return t;
}

inline std::vector<std::vector<std::string>> constant_prob_rows(const std::vector<std::string>& per_row, Index cols) {
  std::vector<std::vector<std::string>> t;
  for (const auto& v : per_row) t.emplace_back(cols, v);
  return t;
}

inline std::vector<std::vector<std::string>> tcell_P2_printed() {
  std::vector<std::vector<std::string>> t(4, std::vector<std::string>(16, "0"));
  for (Index j = 0; j < 16; ++j) {
    const bool live = (j / 4) % 2 == 0;
    t[0][j] = live ? "1/8" : "0";
    t[1][j] = live ? "7/8" : "0";
    t[3][j] = live ? "0" : "1";
  }
  return t;
}
inline std::vector<std::vector<std::string>> tcell_P3() { return constant_prob_rows({"3/8", "1/8", "3/8", "1/8"}, 16); }
inline std::vector<std::vector<std::string>> tcell_P4() {
  return constant_prob_rows({"1/16", "1/16", "1/16", "1/16", "3/16", "3/16", "3/16", "3/16"}, 16);
}
inline std::vector<std::vector<std::string>> tcell_P5() { return constant_prob_rows({"1/8", "1/8", "3/8", "3/8"}, 16); }

inline bool prob_equals(const StochasticMatrix& p, const std::vector<std::vector<std::string>>& expected) {
  if (p.rows() != expected.size() || p.cols() != expected.front().size()) return false;
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j)
      if (p.at(i, j) != parse_fraction(expected[i][j])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Independent oracles

/// Dense integer matrices with products taken straight from the definitions.
using IntMat = std::vector<std::vector<long long>>;

inline IntMat int_identity(Index n) {
  IntMat m(n, std::vector<long long>(n, 0));
  for (Index i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat int_mul(const IntMat& a, const IntMat& b) {
  IntMat c(a.size(), std::vector<long long>(b.front().size(), 0));
  for (Index i = 0; i < a.size(); ++i)
    for (Index k = 0; k < b.size(); ++k)
      for (Index j = 0; j < b.front().size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline IntMat int_kron(const IntMat& a, const IntMat& b) {
  const Index ra = a.size(), ca = a.front().size(), rb = b.size(), cb = b.front().size();
  IntMat c(ra * rb, std::vector<long long>(ca * cb, 0));
  for (Index i = 0; i < ra; ++i)
    for (Index j = 0; j < ca; ++j)
      for (Index k = 0; k < rb; ++k)
        for (Index l = 0; l < cb; ++l) c[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
  return c;
}

inline IntMat int_stp(const IntMat& a, const IntMat& b) {
  const Index p = a.front().size(), q = b.size();
  const Index t = std::lcm(p, q);
  return int_mul(int_kron(a, int_identity(t / p)), int_kron(b, int_identity(t / q)));
}

inline IntMat int_of(const LogicalMatrix& l) {
  IntMat m(l.rows(), std::vector<long long>(l.cols(), 0));
  for (Index j = 0; j < l.cols(); ++j) m[l[j]][j] = 1;
  return m;
}

inline IntMat int_of(const BooleanMatrix& b) {
  IntMat m(b.rows(), std::vector<long long>(b.cols(), 0));
  for (Index i = 0; i < b.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) m[i][j] = b.get(i, j);
  return m;
}

inline IntMat int_of(const CountMatrix& c) {
  IntMat m(c.rows(), std::vector<long long>(c.cols(), 0));
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j) m[i][j] = static_cast<long long>(c.at(i, j));
  return m;
}

inline IntMat int_transpose(const IntMat& a) {
  IntMat t(a.front().size(), std::vector<long long>(a.size()));
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < a.front().size(); ++j) t[j][i] = a[i][j];
  return t;
}

/// Unit column vector delta_n^{i+1}.
inline IntMat int_delta(Index n, Index i) {
  IntMat v(n, std::vector<long long>(1, 0));
  v[i][0] = 1;
  return v;
}

/// Truth-level evaluation written independently of the library: level
/// v = k-1-index, NOT 1-v, AND min, OR max, IMPLIES max(1-a,b), IFF
/// 1-|a-b|, XOR |a-b| on the scaled levels.
inline Index oracle_eval(const Expr& e, Index k, const std::map<std::string, Index>& env) {
  using K = Expr::Kind;
  const long top = static_cast<long>(k) - 1;
  auto level = [&](const Expr& x) { return top - static_cast<long>(oracle_eval(x, k, env)); };
  auto index = [&](long v) { return static_cast<Index>(top - v); };
  switch (e.kind) {
    case K::Var: return env.at(e.name);
    case K::Const: return e.value;
    case K::Not: return index(top - level(e.args[0]));
    case K::And: return index(std::min(level(e.args[0]), level(e.args[1])));
    case K::Or: return index(std::max(level(e.args[0]), level(e.args[1])));
    case K::Implies: return index(std::max(top - level(e.args[0]), level(e.args[1])));
    case K::Iff: return index(top - std::abs(level(e.args[0]) - level(e.args[1])));
    case K::Xor: return index(std::abs(level(e.args[0]) - level(e.args[1])));
    case K::Table: {
      Index col = 0;
      for (const auto& a : e.args) col = col * k + oracle_eval(a, k, env);
      return e.table[col];
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Random generators

inline Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, Index k, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int r = depth <= 0 ? pick(rng) % 2 : pick(rng);
  if (r == 0 || vars.empty()) return Expr::constant(rng() % k);
  if (r == 1) return Expr::var(vars[rng() % vars.size()]);
  if (r == 2) return Expr::unary(Expr::Kind::Not, random_expr(rng, vars, k, depth - 1));
  if (r == 3) {
    const Index arity = 1 + rng() % 2;
    std::vector<Index> table(ipow(k, arity));
    for (auto& t : table) t = rng() % k;
    std::vector<Expr> args;
    for (Index i = 0; i < arity; ++i) args.push_back(random_expr(rng, vars, k, depth - 1));
    return Expr::table_of(std::move(table), std::move(args));
  }
  static const Expr::Kind ops[] = {Expr::Kind::And, Expr::Kind::Or, Expr::Kind::Implies, Expr::Kind::Iff,
                                   Expr::Kind::Xor};
  return Expr::binary(ops[rng() % 5], random_expr(rng, vars, k, depth - 1), random_expr(rng, vars, k, depth - 1));
}

/// Random network with n nodes and m controls, each update over a few variables.
inline Network random_network(std::mt19937_64& rng, Index n, Index m, Index k, Index outputs) {
  Network net;
  net.name = "rnd";
  net.k = k;
  for (Index i = 0; i < n; ++i) net.nodes.push_back("x" + std::to_string(i + 1));
  for (Index u = 0; u < m; ++u) net.controls.push_back("u" + std::to_string(u + 1));
  std::vector<std::string> all = net.nodes;
  all.insert(all.end(), net.controls.begin(), net.controls.end());
  for (Index i = 0; i < n; ++i) net.updates.push_back(random_expr(rng, all, k, 3));
  for (Index o = 0; o < outputs; ++o)
    net.outputs.push_back({"y" + std::to_string(o + 1), random_expr(rng, net.nodes, k, 2)});
  return net;
}

/// Random ASSR: each column gets up to `max_succ` successors; some columns empty.
inline Assr random_assr(std::mt19937_64& rng, Index n, Index m, Index p, Index max_succ, bool total) {
  Assr a;
  a.n_states = n;
  a.m_inputs = m;
  a.p_obs = p;
  BooleanMatrix L(n, n * m);
  for (Index j = 0; j < n * m; ++j) {
    Index count = rng() % (max_succ + 1);
    if (total && count == 0) count = 1;
    for (Index c = 0; c < count; ++c) L.set(rng() % n, j);
  }
  a.L = L;
  std::vector<Index> h(n);
  for (auto& x : h) x = rng() % p;
  a.H = LogicalMatrix(p, h);
  return a;
}

inline BooleanMatrix random_boolean(std::mt19937_64& rng, Index r, Index c) {
  BooleanMatrix b(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j)
      if (rng() % 2) b.set(i, j);
  return b;
}

}  // namespace fvn::test
