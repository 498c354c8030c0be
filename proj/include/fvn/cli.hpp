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
 * @file cli.hpp
 *
 * The pipeline behind the `fvn` command line tool. run() returns 0 on
 * success, 1 for invalid input (with an error JSON on `err`) and 2 for
 * internal errors.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fvn/aggregation.hpp"
#include "fvn/dot.hpp"
#include "fvn/json.hpp"
#include "fvn/netdsl.hpp"
#include "fvn/transition.hpp"

namespace fvn {

struct RunConfig {
  std::string command;  // compile | quotient | check | aggregate | simulate | export-dot
  std::string input;
  std::string out_dir = ".";
  Index horizon = 3;
  bool horizon_given = false;
  std::uint64_t seed = 0;
  std::optional<Index> size_cap;  // falls back to FVN_SIZE_CAP, then the default
  SimulationMode mode = SimulationMode::BooleanNondet;
  std::string inputs;   // simulate: steps separated by ';', control values by ','
  std::string initial;  // simulate: one value per aggregated state variable
};

/// --size-cap, else $FVN_SIZE_CAP, else kDefaultSizeCap.
inline Index resolve_size_cap(const std::optional<Index>& flag) {
  if (flag) {
    if (*flag < 1) throw ValidationError("size cap must be at least 1", "--size-cap");
    return *flag;
  }
  if (const char* env = std::getenv("FVN_SIZE_CAP"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v < 1) throw ValidationError(std::string("FVN_SIZE_CAP='") + env + "' is not a positive integer", "FVN_SIZE_CAP");
    return static_cast<Index>(v);
  }
  return kDefaultSizeCap;
}

inline Json error_json(const std::exception& e, const std::string& file) {
  Json err;
  err["message"] = e.what();
  if (!file.empty()) err["file"] = file;
  if (auto* fe = dynamic_cast<const Error*>(&e)) {
    err["kind"] = fe->kind();
    if (auto* p = dynamic_cast<const ParseError*>(&e)) {
      err["line"] = p->line();
      err["column"] = p->column();
    } else if (auto* v = dynamic_cast<const ValidationError*>(&e)) {
      if (!v->identifier().empty()) err["identifier"] = v->identifier();
      if (v->line()) err["line"] = *v->line();
    } else if (auto* d = dynamic_cast<const DeadColumnError*>(&e)) {
      err["matrix_column"] = d->column() + 1;
    } else if (auto* s = dynamic_cast<const SizeCapError*>(&e)) {
      err["requested"] = s->requested();
      err["cap"] = s->cap();
    }
  } else {
    err["kind"] = "internal";
  }
  return Json{{"error", err}};
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path artifact(const RunConfig& c, const std::string& suffix) {
  const auto stem = std::filesystem::path(c.input).stem().string();
  return std::filesystem::path(c.out_dir) / (stem + suffix);
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + p.string() + "'", p.string());
  out << text;
}

inline void write_json(const std::filesystem::path& p, const Json& j) { write_file(p, j.dump(2) + "\n"); }

/// "1,2;2,1" -> {{0,1},{1,0}}: 1-based delta indices.
inline std::vector<std::vector<Index>> parse_value_rows(const std::string& text, const char* what) {
  std::vector<std::vector<Index>> rows;
  if (text.find_first_not_of(" \t") == std::string::npos) return rows;
  std::stringstream steps(text);
  std::string step;
  while (std::getline(steps, step, ';')) {
    std::vector<Index> row;
    std::stringstream vals(step);
    std::string v;
    while (std::getline(vals, v, ',')) {
      const auto b = v.find_first_not_of(" \t");
      const auto e = v.find_last_not_of(" \t");
      if (b == std::string::npos) throw ValidationError(std::string("empty value in ") + what, what);
      const std::string t = v.substr(b, e - b + 1);
      if (t.find_first_not_of("0123456789") != std::string::npos || t.size() > 6 || std::stoul(t) == 0)
        throw ValidationError(std::string(what) + " value '" + t + "' is not a positive 1-based index", what);
      row.push_back(std::stoul(t) - 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json name_or_index(const std::vector<std::string>& names, Index i) {
  if (i < names.size()) return names[i];
  return i + 1;
}

/// State, input and observation labels for report output. Raw transition
/// systems have names; compiled networks use 1-based composite indices.
struct Labels {
  const Assr& a;
  Json state(Index x) const { return a.k == 0 ? name_or_index(a.state_names, x) : Json(x + 1); }
  Json input(Index u) const { return a.k == 0 ? name_or_index(a.input_names, u) : Json(u + 1); }
  Json obs(Index o) const { return a.k == 0 ? name_or_index(a.output_names, o) : Json(o + 1); }
};

inline Json word_json(const OutputWord& w, const Labels& l) {
  Json in = Json::array(), obs = Json::array();
  for (Index u : w.inputs) in.push_back(l.input(u));
  for (Index o : w.observations) obs.push_back(l.obs(o));
  return Json{{"inputs", in}, {"observations", obs}, {"truncated", w.truncated}};
}

inline std::string word_text(const OutputWord& w, const Labels& l) {
  std::string s = "(";
  for (Index i = 0; i < w.observations.size(); ++i) {
    const auto o = l.obs(w.observations[i]);
    s += (i ? "," : "") + (o.is_string() ? o.get<std::string>() : o.dump());
  }
  return s + (w.truncated ? ")+dead" : ")");
}

struct Loaded {
  bool is_ts = false;
  RawTransitionSpec spec;
  Network net;
};

inline Loaded load_model(const std::string& path) {
  const auto text = read_file(path);
  Loaded m;
  m.is_ts = looks_like_transition_system(text);
  if (m.is_ts) m.spec = parse_transition_system(text);
  else m.net = parse_network(text);
  return m;
}

inline Assr compile_model(const Loaded& m, Index cap) {
  return m.is_ts ? compile_raw_ts(m.spec) : compile_network(m.net, cap);
}

inline Json bisimulation_json(const BisimulationReport& r, const Labels& l) {
  Json j{{"verdict", r.bisimulation ? "BISIMULATION" : "NOT_BISIMULATION"},
         {"shortcut", r.shortcut},
         {"quotient_deterministic", r.quotient_deterministic},
         {"system_deterministic", r.system_deterministic},
         {"total", r.total}};
  if (r.witness) {
    const auto& w = *r.witness;
    Json c1 = Json::array(), c2 = Json::array();
    for (Index c : w.x1_classes) c1.push_back(l.obs(c));
    for (Index c : w.x2_classes) c2.push_back(l.obs(c));
    j["witness"] = Json{{"x1", l.state(w.x1)}, {"x2", l.state(w.x2)}, {"input", l.input(w.input)},
                        {"successor", w.successor ? l.state(*w.successor) : Json()},
                        {"x1_successor_classes", c1}, {"x2_successor_classes", c2}};
  }
  return j;
}

inline int cmd_compile(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c.input);
  const auto a = compile_model(m, resolve_size_cap(c.size_cap));
  const auto path = artifact(c, ".assr.json");
  write_json(path, to_json(a));
  out << "compiled " << c.input << ": " << a.n_states << " states, " << a.m_inputs << " inputs, " << a.p_obs
      << " observations -> " << path.string() << "\n";
  return 0;
}

inline int cmd_quotient(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c.input);
  const auto a = compile_model(m, resolve_size_cap(c.size_cap));
  const auto q = quotient(a);
  if (q.boolean() != quotient_by_definition(a).boolean())
    throw std::logic_error("quotient disagrees with the set-level construction");
  auto j = to_json(q);
  j["deterministic"] = is_deterministic(q);
  const auto path = artifact(c, ".quotient.json");
  write_json(path, j);
  out << "quotient of " << c.input << ": " << q.n_states << " classes, "
      << (is_deterministic(q) ? "deterministic" : "non-deterministic") << " -> " << path.string() << "\n";
  return 0;
}

inline int cmd_check(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c.input);
  const auto a = compile_model(m, resolve_size_cap(c.size_cap));
  const Labels l{a};
  const auto q = quotient(a);
  const Labels lq{q};
  const auto bis = check_bisimulation(a);
  const auto lang = check_language_relation(a, c.horizon);

  Json classes = Json::array();
  for (const auto& cr : lang.classes) {
    Json missing = Json::array(), extra = Json::array();
    for (const auto& w : cr.not_in_quotient) missing.push_back(word_json(w, l));
    for (const auto& w : cr.only_in_quotient) extra.push_back(word_json(w, lq));
    classes.push_back({{"class", l.obs(cr.cls)},
                       {"inclusion", cr.inclusion},
                       {"equality", cr.equality},
                       {"not_in_quotient", missing},
                       {"only_in_quotient", extra}});
  }
  Json report{{"kind", "check_report"},
              {"deterministic", is_deterministic(a)},
              {"quotient_deterministic", is_deterministic(q)},
              {"bisimulation", bisimulation_json(bis, l)},
              {"language",
               {{"horizon", lang.horizon},
                {"inclusion", lang.inclusion},
                {"equality", lang.equality},
                {"partial", lang.partial},
                {"classes", classes}}}};
  const auto path = artifact(c, ".check.json");
  write_json(path, report);

  out << "bisimulation: " << (bis.bisimulation ? "BISIMULATION" : "NOT_BISIMULATION");
  if (!bis.shortcut.empty()) out << " (shortcut: " << bis.shortcut << ")";
  out << "\nlanguage (horizon " << lang.horizon << "): inclusion " << (lang.inclusion ? "holds" : "FAILS")
      << ", equality " << (lang.equality ? "holds" : "fails") << "\n";
  for (const auto& cr : lang.classes)
    for (const auto& w : cr.only_in_quotient) {
      const auto o = l.obs(cr.cls);
      out << "  class " << (o.is_string() ? o.get<std::string>() : o.dump()) << ": quotient-only word "
          << word_text(w, lq) << "\n";
    }
  out << "-> " << path.string() << "\n";
  return 0;
}

inline int cmd_aggregate(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c.input);
  if (m.is_ts) throw ValidationError("aggregate needs a network with block declarations", c.input);
  if (m.net.blocks.empty()) throw ValidationError("network declares no blocks", c.input);
  const Index cap = resolve_size_cap(c.size_cap);
  const auto agg = assemble_aggregated(m.net, cap);

  const auto g = build_network_graph(m.net);
  for (const auto& decl : m.net.blocks) {
    const auto blk = resolve_block(m.net, g, decl);
    const auto a = compile_network(extract_block(m.net, blk), cap);
    const auto bq = block_simulation(a);
    write_json(artifact(c, "." + decl.name + ".assr.json"), to_json(a));
    write_json(artifact(c, "." + decl.name + ".count.json"), to_json(bq.count));
    write_json(artifact(c, "." + decl.name + ".boolean.json"), to_json(bq.boolean_sim));
    write_json(artifact(c, "." + decl.name + ".stochastic.json"), to_json(bq.prob));
    out << "block " << decl.name << ": " << blk.nodes.size() << " nodes, " << blk.controls.size() << " controls, "
        << blk.inputs.size() << " block inputs, " << blk.outputs.size() << " outputs, "
        << (bq.deterministic ? "deterministic" : "non-deterministic") << " quotient\n";
  }
  const auto path = artifact(c, ".aggregated.json");
  write_json(path, to_json(agg));
  write_file(artifact(c, ".aggregated.dot"), aggregated_to_dot(agg));
  out << "aggregated network: " << agg.state_variables().size() << " state nodes, " << agg.controls.size()
      << " controls -> " << path.string() << "\n";
  return 0;
}

inline int cmd_simulate(const RunConfig& c, std::ostream& out) {
  Json j;
  try {
    j = Json::parse(read_file(c.input));
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), c.input);
  }
  const auto agg = aggregated_from_json(j);
  const auto vars = agg.state_variables();
  const auto steps = parse_value_rows(c.inputs, "--inputs");
  std::vector<Index> init(vars.size(), 0);
  if (!c.initial.empty()) {
    const auto rows = parse_value_rows(c.initial, "--initial");
    if (rows.size() != 1) throw ValidationError("--initial takes one comma-separated row", "--initial");
    init = rows.front();
  }
  const Index horizon = c.horizon_given ? c.horizon : steps.size();
  const auto res = simulate_aggregated(agg, init, steps, horizon, c.mode, c.seed);

  const Index p = agg.outputs.size();
  Json words = Json::array();
  for (const auto& w : res.words) {
    Json joint = Json::array(), values = Json::array();
    for (Index y : w.observations) {
      joint.push_back(y + 1);
      Json v = Json::array();
      for (Index d : decode_digits(y, agg.k, p)) v.push_back(d + 1);
      values.push_back(std::move(v));
    }
    words.push_back({{"observations", values}, {"joint", joint}, {"truncated", w.truncated}});
  }
  Json outputs = Json::array();
  for (const auto& o : agg.outputs) outputs.push_back(o.name);
  Json traj{{"kind", "trajectory"},
            {"mode", c.mode == SimulationMode::Probabilistic ? "probabilistic" : "boolean"},
            {"seed", c.seed},
            {"horizon", horizon},
            {"state_variables", vars},
            {"outputs", outputs},
            {"partial", res.partial},
            {"words", words}};
  if (c.mode == SimulationMode::Probabilistic) {
    Json states = Json::array();
    for (const auto& s : res.states) {
      Json row = Json::array();
      for (Index v : s) row.push_back(v + 1);
      states.push_back(std::move(row));
    }
    traj["states"] = std::move(states);
  }
  const auto path = artifact(c, ".trajectory.json");
  write_json(path, traj);
  out << "simulated " << horizon << " steps: " << res.words.size() << " output word(s)"
      << (res.partial ? " (partial)" : "") << " -> " << path.string() << "\n";
  return 0;
}

inline int cmd_export_dot(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c.input);
  const auto path = artifact(c, ".dot");
  write_file(path, m.is_ts ? transition_system_to_dot(m.spec) : network_to_dot(m.net));
  out << "graph -> " << path.string() << "\n";
  return 0;
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (!std::filesystem::is_directory(c.out_dir))
      throw ValidationError("output directory '" + c.out_dir + "' does not exist", c.out_dir);
    if (c.command == "compile") return detail::cmd_compile(c, out);
    if (c.command == "quotient") return detail::cmd_quotient(c, out);
    if (c.command == "check") return detail::cmd_check(c, out);
    if (c.command == "aggregate") return detail::cmd_aggregate(c, out);
    if (c.command == "simulate") return detail::cmd_simulate(c, out);
    if (c.command == "export-dot") return detail::cmd_export_dot(c, out);
    throw ValidationError("unknown subcommand '" + c.command + "'", c.command);
  } catch (const Error& e) {
    err << error_json(e, c.input).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << error_json(e, c.input).dump() << "\n";
    return 2;
  }
}

}  // namespace fvn
