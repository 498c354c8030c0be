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

/**
 * @file assr.hpp
 *
 * Algebraic state-space form x(t+1) = L ⋉ u(t) ⋉ x(t), y(t) = H ⋉ x(t).
 * Column u*n + x of L holds the successors of state x under input u.
 */

#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "fvn/error.hpp"
#include "fvn/expr.hpp"
#include "fvn/matrix.hpp"
#include "fvn/netdsl.hpp"

namespace fvn {

inline constexpr Index kDefaultSizeCap = Index{1} << 24;

struct Assr {
  Index n_states = 1;
  Index m_inputs = 1;  // 1 for autonomous systems
  Index p_obs = 1;
  std::variant<LogicalMatrix, BooleanMatrix> L;
  LogicalMatrix H;

  // Naming metadata. For a compiled network `k` is the domain size and the
  // names are the variables of the composite orderings; for a raw
  // transition system `k` is 0 and the names are the listed symbols.
  Index k = 0;
  std::vector<std::string> state_names;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;

  bool is_logical() const { return std::holds_alternative<LogicalMatrix>(L); }
  const LogicalMatrix& logical() const { return std::get<LogicalMatrix>(L); }
  BooleanMatrix boolean() const {
    if (auto* l = std::get_if<LogicalMatrix>(&L)) return BooleanMatrix(*l);
    return std::get<BooleanMatrix>(L);
  }

  /// Successor state indices of (x, u).
  std::vector<Index> successors(Index x, Index u) const {
    const Index col = u * n_states + x;
    if (auto* l = std::get_if<LogicalMatrix>(&L)) return {(*l)[col]};
    return std::get<BooleanMatrix>(L).column_ones(col);
  }

  /// Observation index of state x.
  Index observe(Index x) const { return H[x]; }

  void check() const {
    const Index rows = is_logical() ? logical().rows() : std::get<BooleanMatrix>(L).rows();
    const Index cols = is_logical() ? logical().cols() : std::get<BooleanMatrix>(L).cols();
    if (rows != n_states || cols != detail::checked_mul(m_inputs, n_states))
      throw DimensionError("transition matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                           ", expected " + std::to_string(n_states) + "x" + std::to_string(m_inputs * n_states));
    if (H.rows() != p_obs || H.cols() != n_states)
      throw DimensionError("observation matrix is " + std::to_string(H.rows()) + "x" + std::to_string(H.cols()) +
                           ", expected " + std::to_string(p_obs) + "x" + std::to_string(n_states));
  }
};

/// Mixed-radix helpers over a k-valued domain, first digit most significant.
inline Index encode_digits(const std::vector<Index>& digits, Index k) {
  Index x = 0;
  for (Index d : digits) x = x * k + d;
  return x;
}

inline std::vector<Index> decode_digits(Index x, Index k, Index count) {
  std::vector<Index> d(count);
  for (Index i = count; i-- > 0;) {
    d[i] = x % k;
    x /= k;
  }
  return d;
}

/// Structure matrix M_op with op(a, b) = M_op ⋉ a ⋉ b in vector form.
inline LogicalMatrix operator_structure_matrix(Expr::Kind op, Index k) {
  if (k < 2) throw DimensionError("structure matrices need k >= 2");
  if (op == Expr::Kind::Not) {
    std::vector<Index> c(k);
    for (Index a = 0; a < k; ++a) c[a] = apply_connective(op, k, a);
    return LogicalMatrix(k, std::move(c));
  }
  if (!is_binary(op)) throw std::logic_error("operator_structure_matrix: not a connective");
  std::vector<Index> c(k * k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) c[a * k + b] = apply_connective(op, k, a, b);
  return LogicalMatrix(k, std::move(c));
}

namespace detail {

class ExprCompiler {
 public:
  ExprCompiler(const std::vector<std::string>& order, Index k, Index cap)
      : order_(order), k_(k), K_(ipow(k, order.size())), cap_(cap) {}

  LogicalMatrix compile(const Expr& e) const {
    using Kd = Expr::Kind;
    switch (e.kind) {
      case Kd::Var: return projection(e.name);
      case Kd::Const: return LogicalMatrix::constant(k_, e.value, K_);
      case Kd::Not: return stp(operator_structure_matrix(Kd::Not, k_), compile(e.args[0]));
      case Kd::Table: {
        const LogicalMatrix table(k_, e.table);
        return stp(table, joint(e.args));
      }
      default: return stp(operator_structure_matrix(e.kind, k_), joint(e.args));
    }
  }

 private:
  /// 1ᵀ_{k^p} ⊗ I_k ⊗ 1ᵀ_{k^{N-p-1}}.
  LogicalMatrix projection(const std::string& name) const {
    auto it = std::find(order_.begin(), order_.end(), name);
    if (it == order_.end()) throw ValidationError("unresolved variable '" + name + "'", name);
    const Index p = static_cast<Index>(it - order_.begin());
    const auto before = LogicalMatrix::constant(1, 0, ipow(k_, p));
    const auto after = LogicalMatrix::constant(1, 0, ipow(k_, order_.size() - p - 1));
    return kron(kron(before, LogicalMatrix::identity(k_)), after);
  }

  /// Structure matrix of the composite (e_1(z) ⋉ ... ⋉ e_r(z)) as a function of z:
  /// J ⋉ z ⋉ M ⋉ z = J ⋉ (I_K ⊗ M) ⋉ PR_K ⋉ z.
  LogicalMatrix joint(const std::vector<Expr>& args) const {
    LogicalMatrix j = compile(args.front());
    if (args.size() > 1 && checked_mul(K_, K_) > cap_)
      throw SizeCapError("expression product needs " + std::to_string(K_) + "^2 columns", K_ * K_, cap_);
    for (Index i = 1; i < args.size(); ++i) {
      const auto lifted = kron(LogicalMatrix::identity(K_), compile(args[i]));
      j = stp(stp(j, lifted), power_reducing_matrix(K_));
    }
    return j;
  }

  const std::vector<std::string>& order_;
  Index k_;
  Index K_;
  Index cap_;
};

}  // namespace detail

/// M_e ∈ 𝓛_{k×k^N} with M_e ⋉ z = e(z) for z = z_1 ⋉ ... ⋉ z_N ordered as `var_order`.
inline LogicalMatrix compile_expr(const Expr& e, const std::vector<std::string>& var_order, Index k,
                                  Index size_cap = kDefaultSizeCap) {
  if (k < 2) throw DimensionError("compile_expr needs k >= 2");
  return detail::ExprCompiler(var_order, k, size_cap).compile(e);
}

/// Compile a network into its ASSR. Refuses (SizeCapError) when k^(m+n)
/// exceeds `size_cap` columns.
inline Assr compile_network(const Network& net, Index size_cap = kDefaultSizeCap) {
  validate(net);
  const Index k = net.k;
  const Index n = net.nodes.size();
  const Index m = net.controls.size();
  Index columns = 1;
  bool overflow = false;
  for (Index i = 0; i < n + m && !overflow; ++i) overflow = __builtin_mul_overflow(columns, k, &columns);
  if (overflow || columns > size_cap)
    throw SizeCapError("network '" + net.name + "' has " + std::to_string(k) + "^" + std::to_string(n + m) +
                           " state/control columns, above the cap of " + std::to_string(size_cap) +
                           "; declare blocks and aggregate first, or raise the cap",
                       overflow ? std::numeric_limits<Index>::max() : columns, size_cap);

  Assr a;
  a.k = k;
  a.n_states = ipow(k, n);
  a.m_inputs = ipow(k, m);
  a.state_names = net.nodes;
  a.input_names = net.controls;

  // Composite variable order: controls first, then nodes.
  std::vector<std::string> all = net.controls;
  all.insert(all.end(), net.nodes.begin(), net.nodes.end());
  auto position = [&](const std::string& v) { return static_cast<Index>(std::find(all.begin(), all.end(), v) - all.begin()); };

  struct Compiled {
    std::vector<Index> support;  // positions in `all`
    LogicalMatrix M;
  };
  auto compile_over_support = [&](const Expr& e) {
    Compiled c;
    std::vector<std::string> vars;
    for (const auto& v : variables_of(e)) c.support.push_back(position(v));
    std::sort(c.support.begin(), c.support.end());
    for (Index s : c.support) vars.push_back(all[s]);
    c.M = compile_expr(e, vars, k, size_cap);
    return c;
  };
  std::vector<Compiled> nodes;
  for (const auto& f : net.updates) nodes.push_back(compile_over_support(f));

  auto support_index = [&](const Compiled& c, const std::vector<Index>& digits) {
    Index s = 0;
    for (Index pos : c.support) s = s * k + digits[pos];
    return s;
  };

  std::vector<Index> cols(columns);
  std::vector<Index> digits(n + m, 0);
  for (Index col = 0; col < columns; ++col) {
    Index next = 0;
    for (const auto& c : nodes) next = next * k + c.M[support_index(c, digits)];
    cols[col] = next;
    for (Index d = n + m; d-- > 0;) {  // odometer increment, last digit fastest
      if (++digits[d] < k) break;
      digits[d] = 0;
    }
  }
  a.L = LogicalMatrix(a.n_states, std::move(cols));

  // Observation: joint output y = y_1 ⋉ ... ⋉ y_p, indexed by state only.
  std::vector<Compiled> outs;
  for (const auto& o : net.outputs) {
    outs.push_back(compile_over_support(o.expr));
    a.output_names.push_back(o.name);
  }
  a.p_obs = ipow(k, outs.size());
  std::vector<Index> h(a.n_states);
  std::vector<Index> xdigits(n + m, 0);
  for (Index x = 0; x < a.n_states; ++x) {
    auto xd = decode_digits(x, k, n);
    std::copy(xd.begin(), xd.end(), xdigits.begin() + static_cast<std::ptrdiff_t>(m));
    Index y = 0;
    for (const auto& c : outs) y = y * k + c.M[support_index(c, xdigits)];
    h[x] = y;
  }
  a.H = LogicalMatrix(a.p_obs, std::move(h));
  a.check();
  return a;
}

/// Compile a raw transition system. L is logical exactly when every
/// (state, input) pair has one successor; otherwise it is Boolean (zero
/// columns for undefined pairs).
inline Assr compile_raw_ts(const RawTransitionSpec& spec) {
  Assr a;
  a.n_states = spec.states.size();
  a.m_inputs = spec.input_count();
  a.p_obs = spec.observations.size();
  a.state_names = spec.states;
  a.input_names = spec.inputs;
  a.output_names = spec.observations;
  if (a.n_states == 0) throw ValidationError("transition system has no states");
  BooleanMatrix L(a.n_states, detail::checked_mul(a.m_inputs, a.n_states));
  for (const auto& t : spec.transitions) {
    if (t.state >= a.n_states || t.input >= a.m_inputs) throw ValidationError("transition index out of range");
    for (Index s : t.successors) {
      if (s >= a.n_states) throw ValidationError("successor index out of range");
      L.set(s, t.input * a.n_states + t.state);
    }
  }
  if (auto l = L.to_logical()) a.L = std::move(*l);
  else a.L = std::move(L);
  if (spec.label.size() != a.n_states) throw ValidationError("observation map is not total");
  a.H = LogicalMatrix(a.p_obs, spec.label);
  a.check();
  return a;
}

}  // namespace fvn
