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
 * @file json.hpp
 *
 * JSON forms of matrices, ASSRs and aggregated networks. Every index
 * written to JSON is 1-based.
 *
 *   {"kind":"logical",    "rows":n, "cols":[i1, i2, ...]}
 *   {"kind":"boolean",    "rows":n, "cols":[[i, ...], [], ...]}
 *   {"kind":"count",      "rows":r, "cols":c, "data":[row-major integers]}
 *   {"kind":"stochastic", "rows":r, "cols":c, "data":["num/den", ...], "dead_columns":[j, ...]}
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fvn/aggregation.hpp"
#include "fvn/assr.hpp"
#include "fvn/matrix.hpp"

namespace fvn {

using Json = nlohmann::ordered_json;

inline Json to_json(const LogicalMatrix& m) {
  return Json{{"kind", "logical"}, {"rows", m.rows()}, {"cols", m.delta_indices()}};
}

inline Json to_json(const BooleanMatrix& m) {
  Json cols = Json::array();
  for (Index j = 0; j < m.cols(); ++j) {
    Json c = Json::array();
    m.for_each_one(j, [&](Index i) { c.push_back(i + 1); });
    cols.push_back(std::move(c));
  }
  return Json{{"kind", "boolean"}, {"rows", m.rows()}, {"cols", std::move(cols)}};
}

inline Json to_json(const CountMatrix& m) {
  return Json{{"kind", "count"}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Json to_json(const StochasticMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back(to_fraction_string(m.at(i, j)));
  std::vector<Index> dead;
  for (Index j : m.dead_columns()) dead.push_back(j + 1);
  return Json{{"kind", "stochastic"}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", data}, {"dead_columns", dead}};
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'", key);
  return j.at(key);
}

inline Index uint_field(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_unsigned()) throw ValidationError(where + ": field '" + key + "' must be a nonnegative integer", key);
  return v.get<Index>();
}

inline void expect_kind(const Json& j, const char* kind) {
  const auto& k = field(j, "kind", "matrix");
  if (!k.is_string() || k.get<std::string>() != kind)
    throw ValidationError(std::string("expected a ") + kind + " matrix", "kind");
}

inline std::string coordinate(Index i, Index j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace detail

inline LogicalMatrix logical_from_json(const Json& j) {
  detail::expect_kind(j, "logical");
  const Index rows = detail::uint_field(j, "rows", "logical matrix");
  const auto& cols = detail::field(j, "cols", "logical matrix");
  if (!cols.is_array()) throw ValidationError("logical matrix: 'cols' must be an array", "cols");
  std::vector<Index> c;
  for (Index col = 0; col < cols.size(); ++col) {
    const auto& v = cols[col];
    if (!v.is_number_unsigned() || v.get<Index>() < 1 || v.get<Index>() > rows)
      throw ValidationError("logical matrix column " + std::to_string(col + 1) + " holds an index outside [1, " +
                                std::to_string(rows) + "]",
                            "column " + std::to_string(col + 1));
    c.push_back(v.get<Index>() - 1);
  }
  return LogicalMatrix(rows, std::move(c));
}

inline BooleanMatrix boolean_from_json(const Json& j) {
  detail::expect_kind(j, "boolean");
  const Index rows = detail::uint_field(j, "rows", "boolean matrix");
  const auto& cols = detail::field(j, "cols", "boolean matrix");
  if (!cols.is_array()) throw ValidationError("boolean matrix: 'cols' must be an array", "cols");
  BooleanMatrix m(rows, cols.size());
  for (Index col = 0; col < cols.size(); ++col) {
    if (!cols[col].is_array())
      throw ValidationError("boolean matrix column " + std::to_string(col + 1) + " must be an array",
                            "column " + std::to_string(col + 1));
    for (const auto& v : cols[col]) {
      if (!v.is_number_unsigned() || v.get<Index>() < 1 || v.get<Index>() > rows)
        throw ValidationError("boolean matrix column " + std::to_string(col + 1) + " holds a row outside [1, " +
                                  std::to_string(rows) + "]",
                              "column " + std::to_string(col + 1));
      m.set(v.get<Index>() - 1, col);
    }
  }
  return m;
}

inline CountMatrix count_from_json(const Json& j) {
  detail::expect_kind(j, "count");
  const Index rows = detail::uint_field(j, "rows", "count matrix");
  const Index cols = detail::uint_field(j, "cols", "count matrix");
  const auto& data = detail::field(j, "data", "count matrix");
  if (!data.is_array() || data.size() != detail::checked_mul(rows, cols))
    throw ValidationError("count matrix: 'data' must hold rows*cols entries", "data");
  CountMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) {
      const auto& v = data[i * cols + c];
      if (!v.is_number_unsigned())
        throw ValidationError("count matrix entry " + detail::coordinate(i, c) + " is not a nonnegative integer",
                              detail::coordinate(i, c));
      m.at(i, c) = v.get<std::uint64_t>();
    }
  return m;
}

inline StochasticMatrix stochastic_from_json(const Json& j) {
  detail::expect_kind(j, "stochastic");
  const Index rows = detail::uint_field(j, "rows", "stochastic matrix");
  const Index cols = detail::uint_field(j, "cols", "stochastic matrix");
  const auto& data = detail::field(j, "data", "stochastic matrix");
  if (!data.is_array() || data.size() != detail::checked_mul(rows, cols))
    throw ValidationError("stochastic matrix: 'data' must hold rows*cols entries", "data");
  StochasticMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) {
      const auto& v = data[i * cols + c];
      if (!v.is_string())
        throw ValidationError("stochastic entry " + detail::coordinate(i, c) + " must be a \"num/den\" string",
                              detail::coordinate(i, c));
      m.at(i, c) = parse_fraction(v.get<std::string>());
      if (m.at(i, c) < 0 || m.at(i, c) > 1)
        throw ValidationError("stochastic entry " + detail::coordinate(i, c) + " lies outside [0, 1]",
                              detail::coordinate(i, c));
    }
  if (j.contains("dead_columns"))
    for (const auto& d : j.at("dead_columns")) m.dead_columns().push_back(d.get<Index>() - 1);
  return m;
}

inline Json to_json(const Assr& a) {
  Json j;
  j["kind"] = "assr";
  if (a.k > 0) j["k"] = a.k;
  j["n_states"] = a.n_states;
  j["m_inputs"] = a.m_inputs;
  j["p_obs"] = a.p_obs;
  j["state_names"] = a.state_names;
  j["input_names"] = a.input_names;
  j["output_names"] = a.output_names;
  j["ordering"] = "x(t+1) = L u(t) x(t), column (u-1)*n_states + x";
  j["deterministic"] = is_deterministic(a);
  j["L"] = a.is_logical() ? to_json(a.logical()) : to_json(std::get<BooleanMatrix>(a.L));
  j["H"] = to_json(a.H);
  return j;
}

inline Assr assr_from_json(const Json& j) {
  Assr a;
  a.k = j.value("k", Index{0});
  a.n_states = detail::uint_field(j, "n_states", "assr");
  a.m_inputs = detail::uint_field(j, "m_inputs", "assr");
  a.p_obs = detail::uint_field(j, "p_obs", "assr");
  a.state_names = j.value("state_names", std::vector<std::string>{});
  a.input_names = j.value("input_names", std::vector<std::string>{});
  a.output_names = j.value("output_names", std::vector<std::string>{});
  const auto& L = detail::field(j, "L", "assr");
  if (L.value("kind", "") == "logical") a.L = logical_from_json(L);
  else a.L = boolean_from_json(L);
  a.H = logical_from_json(detail::field(j, "H", "assr"));
  a.check();
  return a;
}

// ---------------------------------------------------------------------------
// Aggregated networks

inline const char* source_kind_name(Source::Kind k) {
  switch (k) {
    case Source::Kind::Control: return "control";
    case Source::Kind::BlockOutput: return "block_output";
    case Source::Kind::Residual: return "residual";
  }
  return "?";
}

inline Json to_json(const AggregatedNetwork& agg) {
  Json j;
  j["kind"] = "aggregated_network";
  j["name"] = agg.name;
  j["k"] = agg.k;
  j["controls"] = agg.controls;
  j["state_variables"] = agg.state_variables();
  Json blocks = Json::array();
  for (const auto& b : agg.blocks) {
    Json jb;
    jb["name"] = b.name;
    jb["nodes"] = b.nodes;
    jb["controls"] = b.controls;
    jb["inputs"] = b.inputs;
    jb["outputs"] = b.outputs;
    Json wiring = Json::array();
    for (Index i = 0; i < b.inputs.size(); ++i) {
      const auto& s = b.input_sources[i];
      Json w{{"input", b.inputs[i]}, {"source", source_kind_name(s.kind)}};
      if (s.kind == Source::Kind::BlockOutput) {
        w["block"] = agg.blocks[s.index].name;
        w["output"] = agg.blocks[s.index].outputs[s.slot];
      } else {
        w["node"] = agg.residual_nodes[s.index];
      }
      wiring.push_back(std::move(w));
    }
    jb["wiring"] = std::move(wiring);
    jb["deterministic"] = b.quotient.deterministic;
    jb["count"] = to_json(b.quotient.count);
    jb["boolean"] = to_json(b.quotient.boolean_sim);
    jb["stochastic"] = to_json(b.quotient.prob);
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  Json residual = Json::array();
  for (Index r = 0; r < agg.residual_nodes.size(); ++r)
    residual.push_back({{"node", agg.residual_nodes[r]}, {"update", to_string(agg.residual_updates[r], agg.k)}});
  j["residual"] = std::move(residual);
  Json outputs = Json::array();
  for (const auto& o : agg.outputs) outputs.push_back({{"name", o.name}, {"expr", to_string(o.expr, agg.k)}});
  j["outputs"] = std::move(outputs);
  return j;
}

/// Rebuild an aggregated network. Boolean and stochastic forms are recomputed
/// from the counts; wiring is re-derived from names and checked against the file.
inline AggregatedNetwork aggregated_from_json(const Json& j) {
  if (j.value("kind", "") != "aggregated_network")
    throw ValidationError("not an aggregated network (kind != \"aggregated_network\")", "kind");
  AggregatedNetwork agg;
  agg.name = j.value("name", "net");
  agg.k = detail::uint_field(j, "k", "aggregated network");
  if (agg.k < 2 || agg.k > kMaxDomainSize) throw ValidationError("k out of range", "k");
  agg.controls = j.value("controls", std::vector<std::string>{});
  for (const auto& jb : detail::field(j, "blocks", "aggregated network")) {
    AggregatedBlock b;
    b.name = jb.at("name").get<std::string>();
    b.nodes = jb.value("nodes", std::vector<std::string>{});
    b.controls = jb.value("controls", std::vector<std::string>{});
    b.inputs = jb.value("inputs", std::vector<std::string>{});
    b.outputs = jb.value("outputs", std::vector<std::string>{});
    b.quotient = block_quotient_from_counts(count_from_json(detail::field(jb, "count", "block " + b.name)));
    const Index rows = ipow(agg.k, b.outputs.size());
    const Index cols = ipow(agg.k, b.controls.size() + b.inputs.size()) * rows;
    if (b.quotient.count.rows() != rows || b.quotient.count.cols() != cols)
      throw ValidationError("block " + b.name + ": count matrix must be " + std::to_string(rows) + "x" +
                                std::to_string(cols),
                            b.name);
    agg.blocks.push_back(std::move(b));
  }
  for (const auto& r : j.value("residual", Json::array())) {
    agg.residual_nodes.push_back(r.at("node").get<std::string>());
    agg.residual_updates.push_back(parse_expr(r.at("update").get<std::string>(), agg.k));
  }
  for (const auto& o : j.value("outputs", Json::array()))
    agg.outputs.push_back({o.at("name").get<std::string>(), parse_expr(o.at("expr").get<std::string>(), agg.k)});

  for (auto& b : agg.blocks) {
    for (const auto& u : b.controls)
      if (std::find(agg.controls.begin(), agg.controls.end(), u) == agg.controls.end())
        throw ValidationError("block " + b.name + " reads unknown control '" + u + "'", u);
    for (const auto& v : b.inputs) {
      auto s = agg.source_of(v);
      if (!s || s->kind == Source::Kind::Control)
        throw ValidationError("block input '" + v + "' of " + b.name + " has no source", v);
      b.input_sources.push_back(*s);
    }
  }
  auto check_expr = [&](const Expr& e, const std::string& where, bool allow_controls) {
    for (const auto& v : variables_of(e)) {
      auto s = agg.source_of(v);
      if (!s || (!allow_controls && s->kind == Source::Kind::Control))
        throw ValidationError(where + " reads unbound name '" + v + "'", v);
    }
  };
  for (Index r = 0; r < agg.residual_nodes.size(); ++r)
    check_expr(agg.residual_updates[r], "residual node " + agg.residual_nodes[r], true);
  for (const auto& o : agg.outputs) check_expr(o.expr, "output " + o.name, false);
  return agg;
}

}  // namespace fvn
