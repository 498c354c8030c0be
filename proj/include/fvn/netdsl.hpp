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
 * @file netdsl.hpp
 *
 * Text formats for k-valued networks and raw transition systems, plus the
 * network graph derived from a parsed network.
 *
 * Network DSL (line oriented, '#' starts a comment):
 *
 *     net tcell k=2
 *     controls u1 u2 u3
 *     x1 <- x9 & x18
 *     output y1 = x1
 *     block S1 = {x4, x10} outputs {x10}
 *
 * Transition-system DSL:
 *
 *     states x1 x2
 *     inputs u1 u2          # optional; omitted means autonomous
 *     obs O1 O2
 *     trans x1 u1 -> {x2}
 *     label x1 = O1
 */

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fvn/error.hpp"
#include "fvn/expr.hpp"

namespace fvn {

inline constexpr Index kMaxDomainSize = 64;

struct OutputDecl {
  std::string name;
  Expr expr;
  bool operator==(const OutputDecl&) const = default;
};

/// A block declaration as written in the DSL. Without an `outputs {...}`
/// clause the block outputs are derived from the network graph.
struct BlockDecl {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<std::string> outputs;
  bool has_outputs = false;  // an `outputs {...}` clause was written, possibly empty
  bool operator==(const BlockDecl&) const = default;
};

struct Network {
  std::string name = "net";
  Index k = 2;
  std::vector<std::string> nodes;
  std::vector<std::string> controls;
  std::vector<Expr> updates;  // updates[i] drives nodes[i]
  std::vector<OutputDecl> outputs;
  std::vector<BlockDecl> blocks;

  std::optional<Index> node_index(std::string_view n) const {
    auto it = std::find(nodes.begin(), nodes.end(), n);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<Index>(it - nodes.begin());
  }
  std::optional<Index> control_index(std::string_view n) const {
    auto it = std::find(controls.begin(), controls.end(), n);
    if (it == controls.end()) return std::nullopt;
    return static_cast<Index>(it - controls.begin());
  }

  bool operator==(const Network&) const = default;
};

/// Throws ValidationError unless `net` satisfies the structural invariants.
inline void validate(const Network& net) {
  if (net.k < 2 || net.k > kMaxDomainSize)
    throw ValidationError("domain size k=" + std::to_string(net.k) + " out of range [2, " +
                          std::to_string(kMaxDomainSize) + "]");
  if (net.nodes.empty()) throw ValidationError("network declares no nodes");
  if (net.updates.size() != net.nodes.size()) throw ValidationError("every node needs exactly one update");
  std::set<std::string> seen;
  for (const auto& n : net.nodes)
    if (!seen.insert(n).second) throw ValidationError("duplicate update for node '" + n + "'", n);
  for (const auto& u : net.controls)
    if (!seen.insert(u).second) throw ValidationError("name '" + u + "' declared twice", u);
  for (Index i = 0; i < net.nodes.size(); ++i)
    for (const auto& v : variables_of(net.updates[i]))
      if (!seen.count(v))
        throw ValidationError("undeclared identifier '" + v + "' in update of " + net.nodes[i], v);
  std::set<std::string> out_names;
  for (const auto& o : net.outputs) {
    if (!out_names.insert(o.name).second) throw ValidationError("duplicate output '" + o.name + "'", o.name);
    for (const auto& v : variables_of(o.expr)) {
      if (net.control_index(v)) throw ValidationError("output " + o.name + " references control '" + v + "'", v);
      if (!net.node_index(v)) throw ValidationError("undeclared identifier '" + v + "' in output " + o.name, v);
    }
  }
  std::set<std::string> block_names;
  for (const auto& b : net.blocks) {
    if (!block_names.insert(b.name).second) throw ValidationError("duplicate block '" + b.name + "'", b.name);
    if (b.nodes.empty()) throw ValidationError("block " + b.name + " is empty", b.name);
    std::set<std::string> members;
    for (const auto& n : b.nodes) {
      if (!net.node_index(n)) throw ValidationError("block " + b.name + " names unknown node '" + n + "'", n);
      if (!members.insert(n).second) throw ValidationError("block " + b.name + " lists '" + n + "' twice", n);
    }
    for (const auto& o : b.outputs)
      if (!members.count(o))
        throw ValidationError("block " + b.name + " output '" + o + "' is not a member of the block", o);
  }
}

// ---------------------------------------------------------------------------
// Network graph

/// Directed graph on nodes, controls and output vertices. An edge records a
/// syntactic occurrence: source name appears in the target's expression.
struct NetworkGraph {
  Index n_nodes = 0;
  Index n_controls = 0;
  Index n_outputs = 0;
  std::set<std::pair<Index, Index>> node_edges;     // (x_a, x_b): x_a occurs in f_b
  std::set<std::pair<Index, Index>> control_edges;  // (u_a, x_b)
  std::set<std::pair<Index, Index>> output_edges;   // (x_a, o_b): x_a occurs in h_b

  bool has_node_edge(Index from, Index to) const { return node_edges.count({from, to}) > 0; }
  bool has_control_edge(Index from, Index to) const { return control_edges.count({from, to}) > 0; }
  bool has_output_edge(Index from, Index to) const { return output_edges.count({from, to}) > 0; }

  Index in_degree(Index node) const {
    Index d = 0;
    for (const auto& [a, b] : node_edges) d += (b == node);
    for (const auto& [a, b] : control_edges) d += (b == node);
    return d;
  }
};

inline NetworkGraph build_network_graph(const Network& net) {
  NetworkGraph g;
  g.n_nodes = net.nodes.size();
  g.n_controls = net.controls.size();
  g.n_outputs = net.outputs.size();
  for (Index b = 0; b < net.nodes.size(); ++b)
    for (const auto& v : variables_of(net.updates[b])) {
      if (auto a = net.node_index(v)) g.node_edges.insert({*a, b});
      else if (auto u = net.control_index(v)) g.control_edges.insert({*u, b});
    }
  for (Index o = 0; o < net.outputs.size(); ++o)
    for (const auto& v : variables_of(net.outputs[o].expr))
      if (auto a = net.node_index(v)) g.output_edges.insert({*a, o});
  return g;
}

// ---------------------------------------------------------------------------
// Raw transition systems

struct RawTransitionSpec {
  struct Transition {
    Index state = 0;
    Index input = 0;
    std::vector<Index> successors;
    bool operator==(const Transition&) const = default;
  };

  std::vector<std::string> states;
  std::vector<std::string> inputs;  // empty: autonomous, one implicit input
  std::vector<std::string> observations;
  std::vector<Transition> transitions;
  std::vector<Index> label;  // label[state] = observation index

  Index input_count() const { return inputs.empty() ? 1 : inputs.size(); }
  bool deterministic() const {
    return std::all_of(transitions.begin(), transitions.end(),
                       [](const Transition& t) { return t.successors.size() <= 1; });
  }

  bool operator==(const RawTransitionSpec&) const = default;
};

namespace detail {

struct Line {
  std::size_t number = 0;
  std::string text;  // comment stripped
};

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string line(text.substr(start, end - start));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back({number, std::move(line)});
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

/// Minimal cursor over one DSL line, reporting 1-based columns.
class LineCursor {
 public:
  explicit LineCursor(const Line& l) : line_(l) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_.number, pos_ + 1); }

  void skip_ws() {
    while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.text.size();
  }
  bool peek(std::string_view tok) {
    skip_ws();
    return std::string_view(line_.text).substr(pos_, tok.size()) == tok;
  }
  bool eat(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::string ident() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < line_.text.size() &&
           (std::isalnum(static_cast<unsigned char>(line_.text[pos_])) || line_.text[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected an identifier");
    if (std::isdigit(static_cast<unsigned char>(line_.text[start]))) {
      pos_ = start;
      fail("identifiers must not start with a digit");
    }
    return line_.text.substr(start, pos_ - start);
  }
  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    while (!at_end()) out.push_back(ident());
    return out;
  }
  /// `{a, b, c}`; the empty set `{}` is allowed.
  std::vector<std::string> brace_set() {
    expect("{");
    std::vector<std::string> out;
    if (eat("}")) return out;
    out.push_back(ident());
    while (eat(",")) out.push_back(ident());
    expect("}");
    return out;
  }
  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return std::string_view(line_.text).substr(pos_); }
  void finish() {
    if (!at_end()) fail("unexpected trailing text");
  }
  const Line& line() const { return line_; }

 private:
  const Line& line_;
  std::size_t pos_ = 0;
};

/// 1-based column of the first whole-word occurrence of `ident` at or after `from`.
inline std::size_t column_of(const Line& l, const std::string& ident, std::size_t from = 0) {
  auto word_char = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
  for (auto p = l.text.find(ident, from); p != std::string::npos; p = l.text.find(ident, p + 1)) {
    const bool left = p == 0 || !word_char(l.text[p - 1]);
    const bool right = p + ident.size() >= l.text.size() || !word_char(l.text[p + ident.size()]);
    if (left && right) return p + 1;
  }
  return from + 1;
}

}  // namespace detail

/// Parse the network DSL. Throws ParseError (with line/column) on syntax
/// errors and ValidationError on semantic ones.
inline Network parse_network(std::string_view text) {
  Network net;
  bool have_header = false;
  struct Pending {
    detail::Line line;
    std::string target;
    std::size_t expr_col;
  };
  std::vector<Pending> updates;
  std::vector<Pending> outputs;
  std::vector<std::pair<detail::Line, BlockDecl>> blocks;
  std::optional<std::size_t> controls_line;

  const auto lines = detail::split_lines(text);
  for (const auto& line : lines) {
    detail::LineCursor c(line);
    const auto word_at = (c.skip_ws(), c.pos());
    const std::string word = c.ident();
    if (word == "net" && !c.peek("<-")) {
      if (have_header) c.fail("duplicate 'net' header");
      have_header = true;
      net.name = c.ident();
      if (!c.at_end()) {
        c.expect("k");
        c.expect("=");
        c.skip_ws();
        const auto at = c.pos();
        std::string digits;
        for (char ch : c.rest()) {
          if (!std::isdigit(static_cast<unsigned char>(ch))) break;
          digits += ch;
        }
        if (digits.empty()) c.fail("expected an integer after k=");
        for (std::size_t i = 0; i < digits.size(); ++i) c.eat(std::string_view(&digits[i], 1));
        if (digits.size() > 3 || std::stoul(digits) < 2 || std::stoul(digits) > kMaxDomainSize)
          throw ParseError("k=" + digits + " out of range [2, " + std::to_string(kMaxDomainSize) + "]",
                           line.number, at + 1);
        net.k = std::stoul(digits);
      }
      c.finish();
    } else if (word == "controls" && !c.peek("<-")) {
      if (controls_line) c.fail("duplicate 'controls' line");
      controls_line = line.number;
      net.controls = c.ident_list();
    } else if (word == "output" && !c.peek("<-")) {
      std::string name = c.ident();
      c.expect("=");
      c.skip_ws();
      outputs.push_back({line, name, c.pos()});
    } else if (word == "block" && !c.peek("<-")) {
      BlockDecl b;
      b.name = c.ident();
      c.expect("=");
      b.nodes = c.brace_set();
      if (!c.at_end()) {
        const auto kw_at = c.pos();
        if (c.ident() != "outputs") throw ParseError("expected 'outputs'", line.number, kw_at + 1);
        b.outputs = c.brace_set();
        b.has_outputs = true;
      }
      c.finish();
      blocks.emplace_back(line, std::move(b));
    } else {
      if (!c.peek("<-") || c.peek("<->")) {
        detail::LineCursor at(line);
        at.skip_ws();
        throw ParseError("expected '<-' after '" + word + "' (or a known keyword)", line.number, word_at + 1);
      }
      c.expect("<-");
      c.skip_ws();
      updates.push_back({line, word, c.pos()});
    }
  }
  (void)have_header;

  for (const auto& p : updates) {
    if (net.node_index(p.target))
      throw ValidationError("duplicate update for node '" + p.target + "'", p.target, p.line.number);
    net.nodes.push_back(p.target);
  }
  if (net.nodes.empty()) throw ValidationError("network declares no nodes");
  for (const auto& u : net.controls)
    if (net.node_index(u) || std::count(net.controls.begin(), net.controls.end(), u) > 1)
      throw ValidationError("name '" + u + "' declared twice", u, controls_line);

  auto check_names = [&](const Pending& p, const Expr& e, bool allow_controls) {
    for (const auto& v : variables_of(e)) {
      if (net.node_index(v)) continue;
      if (net.control_index(v)) {
        if (allow_controls) continue;
        throw ParseError("output " + p.target + " references control '" + v + "'", p.line.number,
                         detail::column_of(p.line, v, p.expr_col));
      }
      throw ParseError("undeclared identifier '" + v + "'", p.line.number,
                       detail::column_of(p.line, v, p.expr_col));
    }
  };
  for (const auto& p : updates) {
    Expr e = parse_expr(std::string_view(p.line.text).substr(p.expr_col), net.k, p.line.number, p.expr_col);
    check_names(p, e, true);
    net.updates.push_back(std::move(e));
  }
  for (const auto& p : outputs) {
    Expr e = parse_expr(std::string_view(p.line.text).substr(p.expr_col), net.k, p.line.number, p.expr_col);
    check_names(p, e, false);
    net.outputs.push_back({p.target, std::move(e)});
  }
  for (auto& [line, b] : blocks) {
    for (const auto& n : b.nodes)
      if (!net.node_index(n))
        throw ParseError("block " + b.name + " names unknown node '" + n + "'", line.number,
                         detail::column_of(line, n));
    net.blocks.push_back(std::move(b));
  }
  validate(net);
  return net;
}

inline std::string to_string(const Network& net) {
  std::ostringstream os;
  os << "net " << net.name << " k=" << net.k << "\n";
  if (!net.controls.empty()) {
    os << "controls";
    for (const auto& u : net.controls) os << " " << u;
    os << "\n";
  }
  for (Index i = 0; i < net.nodes.size(); ++i) os << net.nodes[i] << " <- " << to_string(net.updates[i], net.k) << "\n";
  for (const auto& o : net.outputs) os << "output " << o.name << " = " << to_string(o.expr, net.k) << "\n";
  for (const auto& b : net.blocks) {
    os << "block " << b.name << " = {";
    for (Index i = 0; i < b.nodes.size(); ++i) os << (i ? ", " : "") << b.nodes[i];
    os << "}";
    if (b.has_outputs) {
      os << " outputs {";
      for (Index i = 0; i < b.outputs.size(); ++i) os << (i ? ", " : "") << b.outputs[i];
      os << "}";
    }
    os << "\n";
  }
  return os.str();
}

inline RawTransitionSpec parse_transition_system(std::string_view text) {
  RawTransitionSpec spec;
  const auto lines = detail::split_lines(text);
  bool have_states = false, have_inputs = false, have_obs = false;

  auto index_in = [](const std::vector<std::string>& v, const std::string& n) -> std::optional<Index> {
    auto it = std::find(v.begin(), v.end(), n);
    if (it == v.end()) return std::nullopt;
    return static_cast<Index>(it - v.begin());
  };
  auto unique = [&](const detail::Line& line, const std::vector<std::string>& v, const char* what) {
    std::set<std::string> s;
    for (const auto& n : v)
      if (!s.insert(n).second)
        throw ParseError(std::string("duplicate ") + what + " '" + n + "'", line.number, detail::column_of(line, n));
  };

  // Pass 1: declarations.
  for (const auto& line : lines) {
    detail::LineCursor c(line);
    const std::string word = c.ident();
    if (word == "states") {
      if (have_states) c.fail("duplicate 'states' line");
      have_states = true;
      spec.states = c.ident_list();
      unique(line, spec.states, "state");
    } else if (word == "inputs") {
      if (have_inputs) c.fail("duplicate 'inputs' line");
      have_inputs = true;
      spec.inputs = c.ident_list();
      unique(line, spec.inputs, "input");
    } else if (word == "obs") {
      if (have_obs) c.fail("duplicate 'obs' line");
      have_obs = true;
      spec.observations = c.ident_list();
      unique(line, spec.observations, "observation");
    } else if (word != "trans" && word != "label") {
      throw ParseError("unknown keyword '" + word + "'", line.number, 1);
    }
  }
  if (spec.states.empty()) throw ValidationError("transition system declares no states");
  if (spec.observations.empty()) throw ValidationError("transition system declares no observations");

  // Pass 2: transitions and labels.
  std::vector<std::optional<Index>> label(spec.states.size());
  std::set<std::pair<Index, Index>> declared;
  for (const auto& line : lines) {
    detail::LineCursor c(line);
    const std::string word = c.ident();
    if (word == "trans") {
      auto lookup = [&](const std::vector<std::string>& v, const std::string& n, const char* what) {
        auto i = index_in(v, n);
        if (!i)
          throw ParseError(std::string("unknown ") + what + " '" + n + "'", line.number, detail::column_of(line, n));
        return *i;
      };
      RawTransitionSpec::Transition t;
      t.state = lookup(spec.states, c.ident(), "state");
      if (!spec.inputs.empty()) t.input = lookup(spec.inputs, c.ident(), "input");
      c.expect("->");
      for (const auto& s : c.brace_set()) {
        const Index succ = lookup(spec.states, s, "state");
        if (std::find(t.successors.begin(), t.successors.end(), succ) != t.successors.end())
          throw ParseError("duplicate successor '" + s + "'", line.number, detail::column_of(line, s));
        t.successors.push_back(succ);
      }
      c.finish();
      if (!declared.insert({t.state, t.input}).second)
        throw ValidationError("duplicate transition for (" + spec.states[t.state] +
                                  (spec.inputs.empty() ? "" : ", " + spec.inputs[t.input]) + ")",
                              spec.states[t.state], line.number);
      spec.transitions.push_back(std::move(t));
    } else if (word == "label") {
      const std::string s = c.ident();
      auto si = index_in(spec.states, s);
      if (!si) throw ParseError("unknown state '" + s + "'", line.number, detail::column_of(line, s));
      c.expect("=");
      const std::string o = c.ident();
      auto oi = index_in(spec.observations, o);
      if (!oi) throw ParseError("unknown observation '" + o + "'", line.number, detail::column_of(line, o));
      c.finish();
      if (label[*si]) throw ValidationError("state '" + s + "' labelled twice", s, line.number);
      label[*si] = *oi;
    }
  }
  for (Index i = 0; i < label.size(); ++i) {
    if (!label[i]) throw ValidationError("state '" + spec.states[i] + "' has no observation label", spec.states[i]);
    spec.label.push_back(*label[i]);
  }
  return spec;
}

inline std::string to_string(const RawTransitionSpec& spec) {
  std::ostringstream os;
  auto list = [&](const char* kw, const std::vector<std::string>& v) {
    os << kw;
    for (const auto& s : v) os << " " << s;
    os << "\n";
  };
  list("states", spec.states);
  if (!spec.inputs.empty()) list("inputs", spec.inputs);
  list("obs", spec.observations);
  for (const auto& t : spec.transitions) {
    os << "trans " << spec.states[t.state];
    if (!spec.inputs.empty()) os << " " << spec.inputs[t.input];
    os << " -> {";
    for (Index i = 0; i < t.successors.size(); ++i) os << (i ? ", " : "") << spec.states[t.successors[i]];
    os << "}\n";
  }
  for (Index i = 0; i < spec.states.size(); ++i)
    os << "label " << spec.states[i] << " = " << spec.observations[spec.label[i]] << "\n";
  return os.str();
}

/// True when the text looks like the transition-system DSL rather than the network DSL.
inline bool looks_like_transition_system(std::string_view text) {
  for (const auto& line : detail::split_lines(text)) {
    std::istringstream is(line.text);
    std::string first;
    is >> first;
    return first == "states" || first == "inputs" || first == "obs" || first == "trans" || first == "label";
  }
  return false;
}

}  // namespace fvn
