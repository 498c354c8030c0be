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
 * @file aggregation.hpp
 *
 * Block-wise aggregation of a network: block inputs/outputs, extraction of a
 * block as a controlled subnetwork, the block's transition counts and their
 * Boolean and probabilistic quotients, assembly of the aggregated network,
 * and its simulation.
 */

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fvn/assr.hpp"
#include "fvn/netdsl.hpp"
#include "fvn/rng.hpp"
#include "fvn/transition.hpp"

namespace fvn {

struct BlockIO {
  std::vector<Index> inputs;    // outside nodes with an edge into the block, node order
  std::vector<Index> outputs;   // block nodes with an edge leaving the block, node order
  std::vector<Index> controls;  // system controls with an edge into the block
};

/// Inputs, outputs and feeding controls of the node set `A`. An edge to an
/// observation vertex counts as leaving the block.
inline BlockIO block_io(const NetworkGraph& g, const std::set<Index>& A) {
  std::set<Index> in, out, ctl;
  for (const auto& [a, b] : g.node_edges) {
    const bool a_in = A.count(a) > 0, b_in = A.count(b) > 0;
    if (!a_in && b_in) in.insert(a);
    if (a_in && !b_in) out.insert(a);
  }
  for (const auto& [a, o] : g.output_edges)
    if (A.count(a)) out.insert(a);
  for (const auto& [u, b] : g.control_edges)
    if (A.count(b)) ctl.insert(u);
  return {{in.begin(), in.end()}, {out.begin(), out.end()}, {ctl.begin(), ctl.end()}};
}

/// No edge runs from a block output back to a block input.
inline bool is_aggregateable(const NetworkGraph& g, const std::set<Index>& A) {
  const auto io = block_io(g, A);
  for (Index o : io.outputs)
    for (Index i : io.inputs)
      if (g.has_node_edge(o, i)) return false;
  return true;
}

/// Every node of `A` read by a system output expression is among `block_outputs`.
inline bool is_output_decoupled(const Network& net, const std::set<Index>& A, const std::vector<Index>& block_outputs) {
  for (const auto& o : net.outputs)
    for (const auto& v : variables_of(o.expr)) {
      const auto i = net.node_index(v);
      if (i && A.count(*i) && std::find(block_outputs.begin(), block_outputs.end(), *i) == block_outputs.end())
        return false;
    }
  return true;
}

struct Block {
  std::string name;
  std::vector<Index> nodes;     // node order
  std::vector<Index> controls;  // system order
  std::vector<Index> inputs;    // node order
  std::vector<Index> outputs;   // declared order, or node order when derived
};

/// Resolve a block declaration against the network graph.
inline Block resolve_block(const Network& net, const NetworkGraph& g, const BlockDecl& decl) {
  Block b;
  b.name = decl.name;
  std::set<Index> A;
  for (const auto& n : decl.nodes) {
    auto i = net.node_index(n);
    if (!i) throw ValidationError("block " + decl.name + " names unknown node '" + n + "'", n);
    A.insert(*i);
  }
  b.nodes.assign(A.begin(), A.end());
  const auto io = block_io(g, A);
  b.inputs = io.inputs;
  b.controls = io.controls;
  if (decl.has_outputs) {
    for (const auto& o : decl.outputs) {
      auto i = net.node_index(o);
      if (!i || !A.count(*i))
        throw ValidationError("block " + decl.name + " output '" + o + "' is not a member of the block", o);
      b.outputs.push_back(*i);
    }
  } else {
    b.outputs = io.outputs;
  }
  return b;
}

/// The block as a controlled network: states are the block nodes, controls
/// are the system controls it reads followed by its block inputs, outputs
/// are the block outputs. Names are kept from the original network.
inline Network extract_block(const Network& net, const Block& block) {
  Network s;
  s.name = block.name;
  s.k = net.k;
  std::set<std::string> allowed;
  for (Index i : block.nodes) {
    s.nodes.push_back(net.nodes[i]);
    s.updates.push_back(net.updates[i]);
    allowed.insert(net.nodes[i]);
  }
  for (Index u : block.controls) s.controls.push_back(net.controls[u]);
  for (Index v : block.inputs) s.controls.push_back(net.nodes[v]);
  allowed.insert(s.controls.begin(), s.controls.end());
  for (Index i = 0; i < s.updates.size(); ++i)
    for (const auto& v : variables_of(s.updates[i]))
      if (!allowed.count(v))
        throw std::logic_error("extract_block: " + s.nodes[i] + " reads '" + v + "', which is not a block input");
  for (Index o : block.outputs) s.outputs.push_back({net.nodes[o], Expr::var(net.nodes[o])});
  return s;
}

/// M_A = H_A L_A (I ⊗ H_Aᵀ) in integer arithmetic: entry (i, u*p + j) counts
/// the states of class j that move into class i under input u.
inline CountMatrix block_count_matrix(const Assr& a) {
  a.check();
  CountMatrix M(a.p_obs, detail::checked_mul(a.m_inputs, a.p_obs));
  for (Index u = 0; u < a.m_inputs; ++u)
    for (Index x = 0; x < a.n_states; ++x)
      for (Index s : a.successors(x, u)) ++M.at(a.H[s], u * a.p_obs + a.H[x]);
  return M;
}

struct BlockQuotient {
  CountMatrix count;
  BooleanMatrix boolean_sim;
  StochasticMatrix prob;
  bool deterministic = false;
};

inline BlockQuotient block_quotient_from_counts(CountMatrix count) {
  BlockQuotient q;
  q.boolean_sim = booleanize(count);
  q.prob = column_normalize(count);
  q.deterministic = true;
  for (Index j = 0; j < q.boolean_sim.cols(); ++j) q.deterministic &= q.boolean_sim.column_count(j) == 1;
  q.count = std::move(count);
  return q;
}

inline BlockQuotient block_simulation(const Assr& a) { return block_quotient_from_counts(block_count_matrix(a)); }

/// ∏_j m_{i_j,j} / ∏_j m_j for the 0-based row selection (i_1, ..., i_η).
inline Rational realization_probability(const CountMatrix& count, const std::vector<Index>& selection) {
  if (selection.size() != count.cols())
    throw DimensionError("selection has " + std::to_string(selection.size()) + " entries, expected " +
                         std::to_string(count.cols()));
  boost::multiprecision::cpp_int num = 1, den = 1;
  for (Index j = 0; j < count.cols(); ++j) {
    const auto total = count.column_sum(j);
    if (total == 0) throw DeadColumnError(j);
    if (selection[j] >= count.rows())
      throw DimensionError("selection row " + std::to_string(selection[j] + 1) + " out of range in column " +
                           std::to_string(j + 1));
    num *= count.at(selection[j], j);
    den *= total;
  }
  return Rational(num, den);
}

/// Row i of column j with probability m_{i,j} / m_j.
inline Index sample_column(const CountMatrix& count, Index j, Rng& rng) {
  const auto total = count.column_sum(j);
  if (total == 0) throw DeadColumnError(j);
  auto r = rng.below(total);
  for (Index i = 0; i < count.rows(); ++i) {
    if (r < count.at(i, j)) return i;
    r -= count.at(i, j);
  }
  throw std::logic_error("sample_column: fell off the column");
}

/// One logical realization M^{i_1,...,i_η}, each column drawn independently.
inline LogicalMatrix sample_realization(const BlockQuotient& q, Rng& rng) {
  std::vector<Index> rows(q.count.cols());
  for (Index j = 0; j < rows.size(); ++j) rows[j] = sample_column(q.count, j, rng);
  return LogicalMatrix(q.count.rows(), std::move(rows));
}

inline LogicalMatrix sample_realization(const BlockQuotient& q, std::uint64_t seed) {
  Rng rng(seed);
  return sample_realization(q, rng);
}

// ---------------------------------------------------------------------------
// Aggregated network

struct Source {
  enum class Kind { Control, BlockOutput, Residual };
  Kind kind = Kind::Control;
  Index index = 0;  // control, block or residual index
  Index slot = 0;   // position among the block's outputs
  bool operator==(const Source&) const = default;
};

struct AggregatedBlock {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<std::string> controls;  // system controls read by the block
  std::vector<std::string> inputs;    // block inputs
  std::vector<std::string> outputs;   // block outputs, the aggregated state variables
  std::vector<Source> input_sources;  // one per block input
  BlockQuotient quotient;
};

struct AggregatedNetwork {
  std::string name;
  Index k = 2;
  std::vector<std::string> controls;
  std::vector<AggregatedBlock> blocks;
  std::vector<std::string> residual_nodes;
  std::vector<Expr> residual_updates;
  std::vector<OutputDecl> outputs;

  /// Aggregated state variables: block outputs in block order, then residual nodes.
  std::vector<std::string> state_variables() const {
    std::vector<std::string> v;
    for (const auto& b : blocks) v.insert(v.end(), b.outputs.begin(), b.outputs.end());
    v.insert(v.end(), residual_nodes.begin(), residual_nodes.end());
    return v;
  }

  /// Where the value of aggregated variable or control `name` comes from.
  std::optional<Source> source_of(const std::string& name) const {
    for (Index u = 0; u < controls.size(); ++u)
      if (controls[u] == name) return Source{Source::Kind::Control, u, 0};
    for (Index b = 0; b < blocks.size(); ++b)
      for (Index s = 0; s < blocks[b].outputs.size(); ++s)
        if (blocks[b].outputs[s] == name) return Source{Source::Kind::BlockOutput, b, s};
    for (Index r = 0; r < residual_nodes.size(); ++r)
      if (residual_nodes[r] == name) return Source{Source::Kind::Residual, r, 0};
    return std::nullopt;
  }
};

/// Check and compile every declared block of `net` and wire the result.
inline AggregatedNetwork assemble_aggregated(const Network& net, const std::vector<BlockDecl>& decls,
                                             Index size_cap = kDefaultSizeCap) {
  validate(net);
  const auto g = build_network_graph(net);
  std::vector<Block> blocks;
  std::map<Index, std::string> owner;
  for (const auto& d : decls) {
    blocks.push_back(resolve_block(net, g, d));
    for (Index i : blocks.back().nodes) {
      auto [it, fresh] = owner.emplace(i, d.name);
      if (!fresh)
        throw ValidationError("node '" + net.nodes[i] + "' belongs to both " + it->second + " and " + d.name,
                              net.nodes[i]);
    }
  }

  AggregatedNetwork agg;
  agg.name = net.name;
  agg.k = net.k;
  agg.controls = net.controls;
  agg.outputs = net.outputs;
  for (Index i = 0; i < net.nodes.size(); ++i)
    if (!owner.count(i)) {
      agg.residual_nodes.push_back(net.nodes[i]);
      agg.residual_updates.push_back(net.updates[i]);
    }

  std::set<Index> visible;
  for (const auto& b : blocks) visible.insert(b.outputs.begin(), b.outputs.end());
  for (Index i = 0; i < net.nodes.size(); ++i)
    if (!owner.count(i)) visible.insert(i);

  for (const auto& o : net.outputs)
    for (const auto& v : variables_of(o.expr)) {
      const Index i = *net.node_index(v);
      if (!visible.count(i))
        throw ValidationError("system output " + o.name + " reads '" + v + "', which is not an output of block " +
                                  owner.at(i),
                              v);
    }
  for (Index r = 0; r < agg.residual_nodes.size(); ++r)
    for (const auto& v : variables_of(agg.residual_updates[r])) {
      auto i = net.node_index(v);
      if (i && !visible.count(*i))
        throw ValidationError("residual node " + agg.residual_nodes[r] + " reads '" + v +
                                  "', which is hidden inside block " + owner.at(*i),
                              v);
    }

  for (const auto& b : blocks) {
    const std::set<Index> A(b.nodes.begin(), b.nodes.end());
    if (!is_aggregateable(g, A))
      throw ValidationError("block " + b.name + " is not aggregate-able: a block output feeds one of its block inputs",
                            b.name);
    if (!is_output_decoupled(net, A, b.outputs))
      throw ValidationError("block " + b.name + " is not output decoupled", b.name);
    const auto io = block_io(g, A);
    for (Index o : io.outputs)
      if (std::find(b.outputs.begin(), b.outputs.end(), o) == b.outputs.end())
        throw ValidationError("block " + b.name + " node '" + net.nodes[o] +
                                  "' is read outside the block but is not a declared output",
                              net.nodes[o]);
  }

  for (const auto& b : blocks) {
    AggregatedBlock ab;
    ab.name = b.name;
    for (Index i : b.nodes) ab.nodes.push_back(net.nodes[i]);
    for (Index u : b.controls) ab.controls.push_back(net.controls[u]);
    for (Index v : b.inputs) ab.inputs.push_back(net.nodes[v]);
    for (Index o : b.outputs) ab.outputs.push_back(net.nodes[o]);
    ab.quotient = block_simulation(compile_network(extract_block(net, b), size_cap));
    agg.blocks.push_back(std::move(ab));
  }
  for (auto& ab : agg.blocks)
    for (const auto& v : ab.inputs) {
      auto src = agg.source_of(v);
      if (!src || src->kind == Source::Kind::Control)
        throw ValidationError("block input '" + v + "' of " + ab.name + " has no source", v);
      ab.input_sources.push_back(*src);
    }
  return agg;
}

inline AggregatedNetwork assemble_aggregated(const Network& net, Index size_cap = kDefaultSizeCap) {
  return assemble_aggregated(net, net.blocks, size_cap);
}

// ---------------------------------------------------------------------------
// Direct simulation of the original network (expression evaluation)

inline std::vector<Index> network_step(const Network& net, const std::vector<Index>& state,
                                       const std::vector<Index>& controls) {
  auto lookup = [&](const std::string& v) -> Index {
    if (auto i = net.node_index(v)) return state[*i];
    return controls[*net.control_index(v)];
  };
  std::vector<Index> next(net.nodes.size());
  for (Index i = 0; i < next.size(); ++i) next[i] = evaluate(net.updates[i], net.k, lookup);
  return next;
}

/// Joint output index y_1 ⋉ ... ⋉ y_p of `state`.
inline Index network_observation(const Network& net, const std::vector<Index>& state) {
  auto lookup = [&](const std::string& v) -> Index { return state[*net.node_index(v)]; };
  Index y = 0;
  for (const auto& o : net.outputs) y = y * net.k + evaluate(o.expr, net.k, lookup);
  return y;
}

// ---------------------------------------------------------------------------
// Aggregated simulation

enum class SimulationMode { BooleanNondet, Probabilistic };

struct SimulationWord {
  std::vector<Index> observations;  // joint output index per time step
  bool truncated = false;           // a block hit a dead column
  auto operator<=>(const SimulationWord&) const = default;
  bool operator==(const SimulationWord&) const = default;
};

struct SimulationResult {
  std::set<SimulationWord> words;
  bool partial = false;
  std::vector<std::vector<Index>> states;  // probabilistic mode: sampled state per step
};

/// Values of the aggregated state variables read off an original network state.
inline std::vector<Index> project_network_state(const AggregatedNetwork& agg, const Network& net,
                                                const std::vector<Index>& node_values) {
  std::vector<Index> v;
  for (const auto& name : agg.state_variables()) v.push_back(node_values.at(*net.node_index(name)));
  return v;
}

namespace detail {

class AggregatedStepper {
 public:
  explicit AggregatedStepper(const AggregatedNetwork& agg) : agg_(agg), vars_(agg.state_variables()) {
    for (Index i = 0; i < vars_.size(); ++i) pos_[vars_[i]] = i;
    for (Index u = 0; u < agg.controls.size(); ++u) ctl_[agg.controls[u]] = u;
    Index offset = 0;
    for (const auto& b : agg.blocks) {
      offsets_.push_back(offset);
      offset += b.outputs.size();
    }
    residual_offset_ = offset;
  }

  Index size() const { return vars_.size(); }

  Index observe(const std::vector<Index>& s) const {
    auto lookup = [&](const std::string& v) -> Index { return s[pos_.at(v)]; };
    Index y = 0;
    for (const auto& o : agg_.outputs) y = y * agg_.k + evaluate(o.expr, agg_.k, lookup);
    return y;
  }

  /// Count-matrix column that block b reads in state s under controls c.
  Index column(Index b, const std::vector<Index>& s, const std::vector<Index>& c) const {
    const auto& blk = agg_.blocks[b];
    Index u = 0;
    for (const auto& name : blk.controls) u = u * agg_.k + c[ctl_.at(name)];
    for (const auto& name : blk.inputs) u = u * agg_.k + s[pos_.at(name)];
    Index y = 0;
    for (Index i = 0; i < blk.outputs.size(); ++i) y = y * agg_.k + s[offsets_[b] + i];
    return u * blk.quotient.count.rows() + y;
  }

  /// Write block b's joint output `row` into state s.
  void place(Index b, Index row, std::vector<Index>& s) const {
    const auto d = decode_digits(row, agg_.k, agg_.blocks[b].outputs.size());
    std::copy(d.begin(), d.end(), s.begin() + static_cast<std::ptrdiff_t>(offsets_[b]));
  }

  void step_residual(const std::vector<Index>& s, const std::vector<Index>& c, std::vector<Index>& next) const {
    auto lookup = [&](const std::string& v) -> Index {
      if (auto it = pos_.find(v); it != pos_.end()) return s[it->second];
      return c[ctl_.at(v)];
    };
    for (Index r = 0; r < agg_.residual_nodes.size(); ++r)
      next[residual_offset_ + r] = evaluate(agg_.residual_updates[r], agg_.k, lookup);
  }

 private:
  const AggregatedNetwork& agg_;
  std::vector<std::string> vars_;
  std::map<std::string, Index> pos_;
  std::map<std::string, Index> ctl_;
  std::vector<Index> offsets_;
  Index residual_offset_ = 0;
};

}  // namespace detail

/// Run the aggregated network from `initial` (values of state_variables())
/// under `inputs[t]` (one value per system control) for `horizon` steps.
/// Blocks update synchronously from time-t values. BooleanNondet returns
/// every reachable output word; Probabilistic samples one trajectory,
/// drawing each block column independently in block order.
inline SimulationResult simulate_aggregated(const AggregatedNetwork& agg, const std::vector<Index>& initial,
                                            const std::vector<std::vector<Index>>& inputs, Index horizon,
                                            SimulationMode mode, std::uint64_t seed = 0,
                                            Index word_cap = kDefaultWordCap) {
  const detail::AggregatedStepper st(agg);
  if (initial.size() != st.size())
    throw ValidationError("initial state has " + std::to_string(initial.size()) + " values, expected " +
                          std::to_string(st.size()));
  for (Index i = 0; i < initial.size(); ++i)
    if (initial[i] >= agg.k)
      throw ValidationError("initial value of '" + agg.state_variables()[i] + "' out of range",
                            agg.state_variables()[i]);
  if (!agg.controls.empty() && inputs.size() < horizon)
    throw ValidationError("input sequence has " + std::to_string(inputs.size()) + " steps, horizon is " +
                          std::to_string(horizon));
  std::vector<std::vector<Index>> in(horizon, std::vector<Index>{});
  for (Index t = 0; t < horizon && !agg.controls.empty(); ++t) {
    if (inputs[t].size() != agg.controls.size())
      throw ValidationError("input step " + std::to_string(t + 1) + " has " + std::to_string(inputs[t].size()) +
                            " values, expected " + std::to_string(agg.controls.size()));
    for (Index v : inputs[t])
      if (v >= agg.k) throw ValidationError("input value out of range at step " + std::to_string(t + 1));
    in[t] = inputs[t];
  }

  SimulationResult res;
  if (mode == SimulationMode::Probabilistic) {
    Rng rng(seed);
    std::vector<Index> s = initial;
    SimulationWord w;
    w.observations.push_back(st.observe(s));
    res.states.push_back(s);
    for (Index t = 0; t < horizon; ++t) {
      std::vector<Index> next(s.size());
      for (Index b = 0; b < agg.blocks.size(); ++b)
        st.place(b, sample_column(agg.blocks[b].quotient.count, st.column(b, s, in[t]), rng), next);
      st.step_residual(s, in[t], next);
      s = std::move(next);
      w.observations.push_back(st.observe(s));
      res.states.push_back(s);
    }
    res.words.insert(std::move(w));
    return res;
  }

  // Subset construction over observation prefixes.
  std::map<std::vector<Index>, std::set<std::vector<Index>>> frontier;
  frontier[{st.observe(initial)}].insert(initial);
  for (Index t = 0; t < horizon && !frontier.empty(); ++t) {
    std::map<std::vector<Index>, std::set<std::vector<Index>>> next_frontier;
    for (const auto& [word, states] : frontier) {
      bool dies = false;
      for (const auto& s : states) {
        std::vector<std::vector<Index>> options(agg.blocks.size());
        for (Index b = 0; b < agg.blocks.size(); ++b)
          options[b] = agg.blocks[b].quotient.boolean_sim.column_ones(st.column(b, s, in[t]));
        if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) {
          dies = true;
          continue;
        }
        std::vector<Index> base(s.size());
        st.step_residual(s, in[t], base);
        std::vector<Index> pick(agg.blocks.size(), 0);
        while (true) {
          auto ns = base;
          for (Index b = 0; b < agg.blocks.size(); ++b) st.place(b, options[b][pick[b]], ns);
          auto w = word;
          w.push_back(st.observe(ns));
          next_frontier[std::move(w)].insert(std::move(ns));
          Index b = agg.blocks.size();
          while (b > 0 && ++pick[b - 1] == options[b - 1].size()) pick[--b] = 0;
          if (b == 0) break;
        }
      }
      if (dies) {
        if (res.words.size() >= word_cap) {
          res.partial = true;
          return res;
        }
        res.words.insert({word, true});
      }
    }
    if (next_frontier.size() > word_cap) {
      res.partial = true;
      return res;
    }
    frontier = std::move(next_frontier);
  }
  for (const auto& [word, states] : frontier) {
    if (res.words.size() >= word_cap) {
      res.partial = true;
      break;
    }
    res.words.insert({word, false});
  }
  return res;
}

}  // namespace fvn
