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
 * @file transition.hpp
 *
 * Quotients under output equivalence, determinism and bisimulation checks,
 * and bounded output-language enumeration.
 */

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fvn/assr.hpp"

namespace fvn {

/// con(X_i) for every observation value i, in increasing state order.
inline std::vector<std::vector<Index>> output_partition(const Assr& a) {
  std::vector<std::vector<Index>> classes(a.p_obs);
  for (Index x = 0; x < a.n_states; ++x) classes[a.H[x]].push_back(x);
  return classes;
}

namespace detail {

inline Assr quotient_shell(const Assr& a) {
  Assr q;
  q.n_states = a.p_obs;
  q.m_inputs = a.m_inputs;
  q.p_obs = a.p_obs;
  q.H = LogicalMatrix::identity(a.p_obs);
  q.k = a.k;
  q.state_names = a.output_names;
  q.input_names = a.input_names;
  q.output_names = a.output_names;
  return q;
}

}  // namespace detail

/// L_q = H ×_B L ×_B (I_m ⊗ Hᵀ), H_q = I_p.
inline Assr quotient(const Assr& a) {
  a.check();
  const BooleanMatrix H(a.H);
  const auto right = kron(BooleanMatrix::identity(a.m_inputs), H.transpose());
  Assr q = detail::quotient_shell(a);
  q.L = bool_product(bool_product(H, a.boolean()), right);
  return q;
}

/// Quotient by direct enumeration: X_j ∈ Σ_∼(X_i, u) iff some x ∈ con(X_i)
/// has a successor in con(X_j).
inline Assr quotient_by_definition(const Assr& a) {
  a.check();
  BooleanMatrix Lq(a.p_obs, a.m_inputs * a.p_obs);
  const auto classes = output_partition(a);
  for (Index u = 0; u < a.m_inputs; ++u)
    for (Index i = 0; i < a.p_obs; ++i)
      for (Index x : classes[i])
        for (Index s : a.successors(x, u)) Lq.set(a.H[s], u * a.p_obs + i);
  Assr q = detail::quotient_shell(a);
  q.L = std::move(Lq);
  return q;
}

/// Every column of L has at most one 1.
inline bool is_deterministic(const Assr& a) {
  if (a.is_logical()) return true;
  const auto& b = std::get<BooleanMatrix>(a.L);
  for (Index j = 0; j < b.cols(); ++j)
    if (b.column_count(j) > 1) return false;
  return true;
}

/// Every column of L has at least one 1.
inline bool is_total(const Assr& a) {
  if (a.is_logical()) return true;
  const auto& b = std::get<BooleanMatrix>(a.L);
  for (Index j = 0; j < b.cols(); ++j)
    if (b.column_count(j) == 0) return false;
  return true;
}

inline std::set<Index> step(const Assr& a, const std::set<Index>& states, Index input) {
  if (input >= a.m_inputs) throw ValidationError("input index " + std::to_string(input + 1) + " out of range");
  std::set<Index> out;
  for (Index x : states) {
    if (x >= a.n_states) throw ValidationError("state index " + std::to_string(x + 1) + " out of range");
    for (Index s : a.successors(x, input)) out.insert(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bisimulation

struct BisimulationWitness {
  Index x1 = 0;
  Index x2 = 0;
  Index input = 0;
  std::optional<Index> successor;   // x1' ∈ Σ(x1,u) with no matching x2' (absent: Σ(x1,u) = ∅ ≠ Σ(x2,u))
  std::set<Index> x1_classes;       // observation classes reachable from x1 under u
  std::set<Index> x2_classes;
};

struct BisimulationReport {
  bool bisimulation = false;
  std::optional<BisimulationWitness> witness;
  bool quotient_deterministic = false;
  bool system_deterministic = false;
  bool total = false;
  /// Which shortcut decides the verdict without the pairwise check:
  /// "quotient-deterministic" (quotient deterministic and Σ total implies
  /// bisimulation), "system-deterministic" (for a deterministic system,
  /// bisimulation iff the quotient is deterministic), or "" if neither.
  std::string shortcut;
};

/// For every x1 ∼ x2 and input u, every x1' ∈ Σ(x1,u) needs some x2' ∈ Σ(x2,u)
/// with x1' ∼ x2', in both directions. An empty successor set only matches an
/// empty one.
inline BisimulationReport check_bisimulation(const Assr& a) {
  a.check();
  BisimulationReport r;
  r.system_deterministic = is_deterministic(a);
  r.total = is_total(a);
  r.quotient_deterministic = is_deterministic(quotient(a));
  if (r.quotient_deterministic && r.total) r.shortcut = "quotient-deterministic";
  else if (r.system_deterministic && r.total) r.shortcut = "system-deterministic";

  auto classes_of = [&](Index x, Index u) {
    std::set<Index> c;
    for (Index s : a.successors(x, u)) c.insert(a.H[s]);
    return c;
  };
  r.bisimulation = true;
  for (const auto& members : output_partition(a)) {
    if (members.size() < 2) continue;
    for (Index u = 0; u < a.m_inputs && r.bisimulation; ++u) {
      const Index ref = members.front();
      const auto ref_classes = classes_of(ref, u);
      for (Index idx = 1; idx < members.size(); ++idx) {
        const auto other = classes_of(members[idx], u);
        if (other == ref_classes) continue;
        BisimulationWitness w;
        w.input = u;
        // Orient the witness so that x1 has a successor class x2 cannot match.
        const bool ref_has_extra =
            std::any_of(ref_classes.begin(), ref_classes.end(), [&](Index c) { return !other.count(c); });
        w.x1 = ref_has_extra ? ref : members[idx];
        w.x2 = ref_has_extra ? members[idx] : ref;
        w.x1_classes = ref_has_extra ? ref_classes : other;
        w.x2_classes = ref_has_extra ? other : ref_classes;
        for (Index s : a.successors(w.x1, u))
          if (!w.x2_classes.count(a.H[s])) {
            w.successor = s;
            break;
          }
        r.witness = w;
        r.bisimulation = false;
        break;
      }
    }
    if (!r.bisimulation) break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Output languages

/// One observed trajectory: the inputs applied and the observations seen,
/// starting with the initial observation. A truncated word ended because the
/// last input in `inputs` led to an empty successor set, so it carries one
/// more input than observation steps.
struct OutputWord {
  std::vector<Index> inputs;
  std::vector<Index> observations;
  bool truncated = false;

  auto operator<=>(const OutputWord&) const = default;
  bool operator==(const OutputWord&) const = default;
};

struct Language {
  std::set<OutputWord> words;
  bool partial = false;  // enumeration stopped at the word cap
};

inline constexpr Index kDefaultWordCap = 1'000'000;

/// All words of length horizon+1 generated from `init` under every input
/// sequence, plus truncated words of trajectories that die earlier.
inline Language output_language(const Assr& a, const std::set<Index>& init, Index horizon,
                                Index word_cap = kDefaultWordCap) {
  a.check();
  Language lang;
  OutputWord cur;

  auto group = [&](const std::set<Index>& states) {
    std::map<Index, std::set<Index>> by_obs;
    for (Index x : states) by_obs[a.H[x]].insert(x);
    return by_obs;
  };
  auto emit = [&](OutputWord w) {
    if (lang.words.size() >= word_cap) {
      lang.partial = true;
      return false;
    }
    lang.words.insert(std::move(w));
    return true;
  };

  std::function<bool(const std::set<Index>&)> dfs = [&](const std::set<Index>& states) {
    if (cur.observations.size() == horizon + 1) return emit(cur);
    for (Index u = 0; u < a.m_inputs; ++u) {
      std::set<Index> next;
      bool some_die = false;
      for (Index x : states) {
        const auto succ = a.successors(x, u);
        some_die |= succ.empty();
        next.insert(succ.begin(), succ.end());
      }
      cur.inputs.push_back(u);
      if (some_die) {
        OutputWord w = cur;
        w.truncated = true;
        if (!emit(std::move(w))) return false;
      }
      for (const auto& [o, members] : group(next)) {
        cur.observations.push_back(o);
        const bool ok = dfs(members);
        cur.observations.pop_back();
        if (!ok) return false;
      }
      cur.inputs.pop_back();
    }
    return true;
  };

  for (const auto& [o, members] : group(init)) {
    cur = OutputWord{};
    cur.observations.push_back(o);
    if (!dfs(members)) break;
  }
  return lang;
}

/// w is a prefix of v (inputs and observations both).
inline bool is_prefix(const OutputWord& w, const OutputWord& v) {
  return w.inputs.size() <= v.inputs.size() && w.observations.size() <= v.observations.size() &&
         std::equal(w.inputs.begin(), w.inputs.end(), v.inputs.begin()) &&
         std::equal(w.observations.begin(), w.observations.end(), v.observations.begin());
}

/// Full words must occur verbatim in `outer`; truncated words must be a
/// prefix of some word of `outer`. Returns the words of `inner` that fail.
inline std::vector<OutputWord> language_difference(const Language& inner, const Language& outer) {
  std::vector<OutputWord> missing;
  for (const auto& w : inner.words) {
    if (outer.words.count(w)) continue;
    bool ok = false;
    if (w.truncated)
      ok = std::any_of(outer.words.begin(), outer.words.end(), [&](const OutputWord& v) { return is_prefix(w, v); });
    if (!ok) missing.push_back(w);
  }
  return missing;
}

struct ClassLanguageReport {
  Index cls = 0;
  bool inclusion = false;
  bool equality = false;
  std::vector<OutputWord> not_in_quotient;  // words of the system missing from the quotient
  std::vector<OutputWord> only_in_quotient;  // quotient words the system cannot produce
};

struct LanguageReport {
  Index horizon = 0;
  std::vector<ClassLanguageReport> classes;  // nonempty classes only
  bool inclusion = true;
  bool equality = true;
  bool partial = false;
};

/// Compare the language of each class con(X_i) with that of X_i in the quotient.
inline LanguageReport check_language_relation(const Assr& a, Index horizon, Index word_cap = kDefaultWordCap) {
  const Assr q = quotient(a);
  const auto classes = output_partition(a);
  LanguageReport rep;
  rep.horizon = horizon;
  for (Index i = 0; i < classes.size(); ++i) {
    if (classes[i].empty()) continue;
    const auto sys = output_language(a, std::set<Index>(classes[i].begin(), classes[i].end()), horizon, word_cap);
    const auto quo = output_language(q, {i}, horizon, word_cap);
    ClassLanguageReport c;
    c.cls = i;
    c.not_in_quotient = language_difference(sys, quo);
    for (const auto& w : quo.words)
      if (!sys.words.count(w)) c.only_in_quotient.push_back(w);
    c.inclusion = c.not_in_quotient.empty();
    c.equality = sys.words == quo.words;
    rep.inclusion &= c.inclusion;
    rep.equality &= c.equality;
    rep.partial |= sys.partial || quo.partial;
    rep.classes.push_back(std::move(c));
  }
  return rep;
}

}  // namespace fvn
