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

#include <sstream>
#include <string>

#include "fvn/aggregation.hpp"
#include "fvn/netdsl.hpp"

namespace fvn {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Network graph: nodes as circles, controls as boxes, outputs as double circles.
/// Declared blocks are drawn as clusters.
inline std::string network_to_dot(const Network& net) {
  using detail::dot_quote;
  const auto g = build_network_graph(net);
  std::ostringstream os;
  os << "digraph " << dot_quote(net.name) << " {\n  rankdir=LR;\n";
  std::set<std::string> clustered;
  for (Index b = 0; b < net.blocks.size(); ++b) {
    os << "  subgraph cluster_" << b << " {\n    label=" << dot_quote(net.blocks[b].name) << ";\n";
    for (const auto& n : net.blocks[b].nodes) {
      os << "    " << dot_quote(n) << " [shape=circle];\n";
      clustered.insert(n);
    }
    os << "  }\n";
  }
  for (const auto& n : net.nodes)
    if (!clustered.count(n)) os << "  " << dot_quote(n) << " [shape=circle];\n";
  for (const auto& u : net.controls) os << "  " << dot_quote(u) << " [shape=box];\n";
  for (const auto& o : net.outputs) os << "  " << dot_quote(o.name) << " [shape=doublecircle];\n";
  for (const auto& [a, b] : g.control_edges)
    os << "  " << dot_quote(net.controls[a]) << " -> " << dot_quote(net.nodes[b]) << ";\n";
  for (const auto& [a, b] : g.node_edges)
    os << "  " << dot_quote(net.nodes[a]) << " -> " << dot_quote(net.nodes[b]) << ";\n";
  for (const auto& [a, o] : g.output_edges)
    os << "  " << dot_quote(net.nodes[a]) << " -> " << dot_quote(net.outputs[o].name) << ";\n";
  os << "}\n";
  return os.str();
}

/// Transition system: one node per state labelled with its observation, one
/// edge per transition labelled with its input.
inline std::string transition_system_to_dot(const RawTransitionSpec& spec) {
  using detail::dot_quote;
  std::ostringstream os;
  os << "digraph ts {\n";
  for (Index i = 0; i < spec.states.size(); ++i)
    os << "  " << dot_quote(spec.states[i]) << " [label=" << dot_quote(spec.states[i] + "\\n" + spec.observations[spec.label[i]])
       << "];\n";
  for (const auto& t : spec.transitions)
    for (Index s : t.successors) {
      os << "  " << dot_quote(spec.states[t.state]) << " -> " << dot_quote(spec.states[s]);
      if (!spec.inputs.empty()) os << " [label=" << dot_quote(spec.inputs[t.input]) << "]";
      os << ";\n";
    }
  os << "}\n";
  return os.str();
}

/// Block diagram of an aggregated network: one box per block listing its
/// outputs, wired to the blocks, residual nodes and controls it reads.
inline std::string aggregated_to_dot(const AggregatedNetwork& agg) {
  using detail::dot_quote;
  std::ostringstream os;
  os << "digraph " << dot_quote(agg.name + "_aggregated") << " {\n  rankdir=LR;\n";
  for (const auto& u : agg.controls) os << "  " << dot_quote(u) << " [shape=plaintext];\n";
  for (const auto& b : agg.blocks) {
    std::string label = b.name + "\\n";
    for (Index i = 0; i < b.outputs.size(); ++i) label += (i ? ", " : "") + b.outputs[i];
    label += b.quotient.deterministic ? "\\ndeterministic" : "\\nnon-deterministic";
    os << "  " << dot_quote(b.name) << " [shape=box, label=" << dot_quote(label) << "];\n";
  }
  for (const auto& r : agg.residual_nodes) os << "  " << dot_quote(r) << " [shape=circle];\n";
  for (const auto& o : agg.outputs) os << "  " << dot_quote(o.name) << " [shape=doublecircle];\n";

  auto vertex_of = [&](const std::string& name) -> std::string {
    auto s = agg.source_of(name);
    if (!s) return name;
    switch (s->kind) {
      case Source::Kind::Control: return agg.controls[s->index];
      case Source::Kind::BlockOutput: return agg.blocks[s->index].name;
      case Source::Kind::Residual: return agg.residual_nodes[s->index];
    }
    return name;
  };
  for (const auto& b : agg.blocks) {
    for (const auto& u : b.controls) os << "  " << dot_quote(u) << " -> " << dot_quote(b.name) << ";\n";
    for (const auto& v : b.inputs)
      os << "  " << dot_quote(vertex_of(v)) << " -> " << dot_quote(b.name) << " [label=" << dot_quote(v) << "];\n";
  }
  for (Index r = 0; r < agg.residual_nodes.size(); ++r)
    for (const auto& v : variables_of(agg.residual_updates[r]))
      os << "  " << dot_quote(vertex_of(v)) << " -> " << dot_quote(agg.residual_nodes[r]) << " [label=" << dot_quote(v)
         << "];\n";
  for (const auto& o : agg.outputs)
    for (const auto& v : variables_of(o.expr))
      os << "  " << dot_quote(vertex_of(v)) << " -> " << dot_quote(o.name) << " [label=" << dot_quote(v) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace fvn
