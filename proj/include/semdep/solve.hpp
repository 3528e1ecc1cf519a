#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semdep/errors.hpp"
#include "semdep/formula.hpp"
#include "semdep/graph.hpp"
#include "semdep/system.hpp"

namespace semdep {

enum class SolveStatus { Acceptable, Paradoxical };

struct SolveStats {
  std::uint64_t valuations_tried = 0;
  std::uint64_t edges_erased = 0;
  std::uint64_t choices_made = 0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Paradoxical;
  std::optional<Valuation> valuation;  // present iff Acceptable
  std::string method;
  SolveStats stats;
};

inline constexpr std::size_t kBruteVariableBudget = 24;

namespace detail {

inline std::vector<VarId> brute_vars(const DenotationSystem& sys) {
  std::vector<VarId> vars = sys.all_vars();
  if (vars.size() > kBruteVariableBudget)
    throw BudgetExceeded("brute-force enumeration over " +
                         std::to_string(vars.size()) +
                         " variables exceeds the budget of " +
                         std::to_string(kBruteVariableBudget));
  return vars;
}

/// Valuations in lexicographic order of the system's vertex order
/// (false < true, first vertex most significant).
inline Valuation valuation_from_counter(const std::vector<VarId>& vars,
                                        std::uint64_t counter) {
  Valuation v;
  const std::size_t k = vars.size();
  for (std::size_t j = 0; j < k; ++j)
    v.set(vars[j], (counter >> (k - 1 - j)) & 1);
  return v;
}

inline bool accepts(const DenotationSystem& sys, const Valuation& v) {
  for (const VarId& s : sys.denoted())
    if (eval(sys.formula_of(s), v) != v.at(s)) return false;
  return true;
}

}  // namespace detail

/// Exhaustive decision procedure and the library's oracle: tries every total
/// valuation in lexicographic order and returns the first acceptable one.
/// Exhaustion makes a Paradoxical verdict a proof at this scale.
inline SolveOutcome solve_brute(const DenotationSystem& sys) {
  const std::vector<VarId> vars = detail::brute_vars(sys);
  SolveOutcome out;
  out.method = "brute";
  const std::uint64_t total = std::uint64_t(1) << vars.size();
  for (std::uint64_t c = 0; c < total; ++c) {
    Valuation v = detail::valuation_from_counter(vars, c);
    ++out.stats.valuations_tried;
    if (detail::accepts(sys, v)) {
      out.status = SolveStatus::Acceptable;
      out.valuation = std::move(v);
      return out;
    }
  }
  out.status = SolveStatus::Paradoxical;
  return out;
}

/// All acceptable valuations, in lexicographic order.
inline std::vector<Valuation> enumerate_acceptable(const DenotationSystem& sys) {
  const std::vector<VarId> vars = detail::brute_vars(sys);
  std::vector<Valuation> out;
  const std::uint64_t total = std::uint64_t(1) << vars.size();
  for (std::uint64_t c = 0; c < total; ++c) {
    Valuation v = detail::valuation_from_counter(vars, c);
    if (detail::accepts(sys, v)) out.push_back(std::move(v));
  }
  return out;
}

namespace detail {

inline bool free_value(const Valuation& free_choice, const VarId& v,
                       bool fallback) {
  return free_choice.contains(v) ? free_choice.at(v) : fallback;
}

inline void verify_outcome(const DenotationSystem& sys, const SolveOutcome& out) {
  if (out.status != SolveStatus::Acceptable) return;
  if (!check_acceptable(sys, *out.valuation).acceptable)
    throw std::logic_error("internal: solver '" + out.method +
                           "' produced a non-acceptable valuation");
}

}  // namespace detail

/// Evaluates a cycle-free system bottom-up: sinks first, then every vertex
/// from its successors' values. Free variables take the supplied choice
/// (default all-false). The result is the unique acceptable extension of
/// that choice.
inline SolveOutcome solve_topological(const DenotationSystem& sys,
                                      const Valuation& free_choice = {},
                                      bool free_default = false) {
  DiGraph g = dependency_graph(sys, {.include_free = true});
  if (!is_cycle_free(g))
    throw PreconditionError("solve_topological: dependency graph is cyclic");
  std::vector<std::size_t> order = topological_order(g);
  SolveOutcome out;
  out.method = "topo";
  Valuation v;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VarId& x = g.vertex_at(*it);
    if (sys.is_denoted(x)) {
      v.set(x, eval(sys.formula_of(x), v));
    } else {
      v.set(x, detail::free_value(free_choice, x, free_default));
      ++out.stats.choices_made;
    }
  }
  out.status = SolveStatus::Acceptable;
  out.valuation = std::move(v);
  detail::verify_outcome(sys, out);
  return out;
}

namespace detail {

/// Per-vertex shape of a chain denotation over its single successor.
enum class ChainForm { ConstTrue, ConstFalse, Identity, Negation };

inline ChainForm classify_chain_form(const Formula& f,
                                     const std::optional<VarId>& succ_var) {
  if (!succ_var) {
    Valuation none;
    return eval(f, none) ? ChainForm::ConstTrue : ChainForm::ConstFalse;
  }
  Valuation v{{*succ_var, false}};
  bool lo = eval(f, v);
  v.set(*succ_var, true);
  bool hi = eval(f, v);
  if (lo == hi) return lo ? ChainForm::ConstTrue : ChainForm::ConstFalse;
  return hi ? ChainForm::Identity : ChainForm::Negation;
}

}  // namespace detail

/// Solver for systems whose dependency graph (free variables as sinks) is a
/// disjoint union of simple directed paths, each denotation being — up to
/// semantic equivalence — the successor, its negation, or a constant.
/// Constants interrupt the upward propagation; the segment above the last
/// constant is seeded by the boundary choice on the free tail. Such systems
/// always have an acceptable valuation.
inline SolveOutcome solve_chain(const DenotationSystem& sys,
                                const Valuation& free_choice = {},
                                bool free_default = false) {
  DiGraph g = dependency_graph(sys, {.include_free = true});
  for (const VarId& x : g.vertices()) {
    if (g.out_degree(x) > 1)
      throw PreconditionError("solve_chain: vertex " + x.str() +
                              " has more than one successor");
    if (g.in_degree(x) > 1)
      throw PreconditionError("solve_chain: vertex " + x.str() +
                              " has more than one predecessor");
  }
  if (!is_cycle_free(g))
    throw PreconditionError("solve_chain: dependency graph is cyclic");

  SolveOutcome out;
  out.method = "chain";
  Valuation v;
  // Each path is walked tail-to-head; tails are the out-degree-0 vertices.
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    if (!g.succ_indices(i).empty()) continue;
    const VarId& tail = g.vertex_at(i);
    bool value;
    if (sys.is_denoted(tail)) {
      value = detail::classify_chain_form(sys.formula_of(tail), std::nullopt) ==
              detail::ChainForm::ConstTrue;
    } else {
      value = detail::free_value(free_choice, tail, free_default);
      ++out.stats.choices_made;
    }
    v.set(tail, value);
    std::size_t cur = i;
    while (!g.pred_indices(cur).empty()) {
      std::size_t up = *g.pred_indices(cur).begin();
      const VarId& x = g.vertex_at(up);
      switch (detail::classify_chain_form(sys.formula_of(x),
                                          g.vertex_at(cur))) {
        case detail::ChainForm::ConstTrue: value = true; break;
        case detail::ChainForm::ConstFalse: value = false; break;
        case detail::ChainForm::Identity: break;
        case detail::ChainForm::Negation: value = !value; break;
      }
      v.set(x, value);
      cur = up;
    }
  }
  out.status = SolveStatus::Acceptable;
  out.valuation = std::move(v);
  detail::verify_outcome(sys, out);
  return out;
}

/// Constructive procedure for simply connected cycle-free systems.
///
/// Step 1 (local): for every vertex, irrelevant successors are replaced by ⊤
/// in the denotation and the corresponding edges erased; denotations that
/// fold to a constant fix their vertex, the value is substituted into all
/// predecessors, and those edges are erased too, isolating the vertex.
/// Step 2 (choice): in what remains, the first undetermined denoted vertex in
/// system order is assigned ⊤; the value is substituted into predecessors,
/// and the lexicographically least assignment of its successors realizing the
/// value is enforced. Because the graph is simply connected, the propagation
/// fronts never meet, so the procedure always ends in an acceptable
/// valuation. Unconstrained free variables default to the boundary choice.
inline SolveOutcome solve_simply_connected(const DenotationSystem& sys,
                                           bool free_default = false) {
  DiGraph g = dependency_graph(sys, {.include_free = true});
  if (!is_simply_connected(g))
    throw PreconditionError(
        "solve_simply_connected: dependency graph is not simply connected");
  if (!is_cycle_free(g))
    throw PreconditionError("solve_simply_connected: dependency graph is cyclic");

  SolveOutcome out;
  out.method = "simply";
  std::map<VarId, Formula> work;
  for (const VarId& s : sys.denoted()) work.emplace(s, sys.formula_of(s));
  std::map<VarId, bool> val;
  std::deque<VarId> queue;

  auto determine = [&](const VarId& x, bool w) {
    auto [it, fresh] = val.emplace(x, w);
    if (!fresh) {
      if (it->second != w)
        throw std::logic_error(
            "internal: conflicting determinations for " + x.str() +
            " (input cannot have been simply connected)");
      return;
    }
    queue.push_back(x);
  };

  // Local analysis: prune edges to successors the current formula no longer
  // depends on (replacing still-occurring ones by ⊤), then fold. Keeps the
  // invariant succ(x) == occurring(work[x]) on analyzed vertices.
  auto analyze = [&](const VarId& x) {
    if (val.count(x)) return;
    Formula f = work.at(x);
    std::set<VarId> rel;
    try {
      rel = relevant(f);
    } catch (const BudgetExceeded&) {
      rel = occurring(f);  // sound over-approximation
    }
    for (const VarId& t : g.succ(x)) {
      if (rel.count(t)) continue;
      f = substitute(f, t, true);
      g.remove_edge(x, t);
      ++out.stats.edges_erased;
    }
    f = simplify(f);
    work.at(x) = std::move(f);
    if (occurring(work.at(x)).empty())
      determine(x, eval(work.at(x), Valuation{}));
  };

  auto process = [&](const VarId& x) {
    const bool w = val.at(x);
    for (const VarId& p : g.pred(x)) {
      work.at(p) = simplify(substitute(work.at(p), x, w));
      g.remove_edge(p, x);
      ++out.stats.edges_erased;
      analyze(p);
    }
    if (!sys.is_denoted(x)) return;
    const Formula& f = work.at(x);
    std::vector<VarId> targets = g.succ(x);
    if (targets.empty()) {
      if (!occurring(f).empty() || eval(f, Valuation{}) != w)
        throw std::logic_error("internal: vertex " + x.str() +
                               " cannot realize its determined value");
      return;
    }
    if (targets.size() > kBruteVariableBudget)
      throw BudgetExceeded("solve_simply_connected: vertex " + x.str() +
                           " has too many successors to enforce");
    const std::uint64_t total = std::uint64_t(1) << targets.size();
    std::optional<Valuation> assignment;
    for (std::uint64_t c = 0; c < total; ++c) {
      Valuation a = detail::valuation_from_counter(targets, c);
      if (eval(f, a) == w) {
        assignment = std::move(a);
        break;
      }
    }
    if (!assignment)
      throw std::logic_error("internal: no successor assignment realizes " +
                             x.str() + " (should be unreachable)");
    for (const VarId& t : targets) {
      g.remove_edge(x, t);
      ++out.stats.edges_erased;
      determine(t, assignment->at(t));
    }
  };

  auto drain = [&] {
    while (!queue.empty()) {
      VarId x = queue.front();
      queue.pop_front();
      process(x);
    }
  };

  for (const VarId& s : sys.denoted()) analyze(s);
  drain();
  for (const VarId& s : sys.denoted()) {
    if (val.count(s)) continue;
    // First undetermined vertex of a remaining component; assign ⊤ first.
    determine(s, true);
    ++out.stats.choices_made;
    drain();
  }
  for (const VarId& fvar : sys.free_vars()) {
    if (val.count(fvar)) continue;
    val.emplace(fvar, free_default);
    ++out.stats.choices_made;
  }

  Valuation v;
  for (const auto& [x, b] : val) v.set(x, b);
  out.status = SolveStatus::Acceptable;
  out.valuation = std::move(v);
  detail::verify_outcome(sys, out);
  return out;
}

// ---------------------------------------------------------------------------
// Yablo-like criterion: transitive graph + every denotation a conjunction of
// negated successors.
// ---------------------------------------------------------------------------

struct ParadoxWitness {
  VarId vertex;  // has successors, and all of them have successors
  bool operator==(const ParadoxWitness&) const = default;
};

struct SafeValuation {
  Valuation valuation;  // true exactly on empty-successor vertices
  bool operator==(const SafeValuation&) const = default;
};

using YabloLikeVerdict = std::variant<ParadoxWitness, SafeValuation>;

/// The induced ⋀− system of a graph: d(x) = conjunction of ¬x' over the
/// successors of x in vertex order (empty junction for sinks).
inline DenotationSystem induced_andnot_system(const DiGraph& g) {
  DenotationSystem sys;
  for (const VarId& x : g.vertices()) {
    std::vector<Formula> kids;
    for (const VarId& s : g.succ(x)) kids.push_back(Formula::negate(Formula::var(s)));
    sys.define(x, make_conj(std::move(kids)));
  }
  return sys;
}

/// Decision for transitive graphs with ⋀− denotations. A vertex whose
/// successors all have successors witnesses paradoxicality of the induced
/// system; if no such vertex exists, assigning ⊤ exactly to the
/// empty-successor vertices is acceptable. Loops are permitted (a loop vertex
/// is its own successor).
inline YabloLikeVerdict yablo_like_check(const DiGraph& g) {
  if (!is_transitive(g))
    throw PreconditionError("yablo_like_check: graph is not transitive");
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    const auto& succ = g.succ_indices(i);
    if (succ.empty()) continue;
    bool all_have_succ = true;
    for (std::size_t j : succ) {
      if (g.succ_indices(j).empty()) {
        all_have_succ = false;
        break;
      }
    }
    if (all_have_succ) return ParadoxWitness{g.vertex_at(i)};
  }
  Valuation v;
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    v.set(g.vertex_at(i), g.succ_indices(i).empty());
  return SafeValuation{std::move(v)};
}

// ---------------------------------------------------------------------------
// Method dispatch (most specific solver first: chain ⊃ simply ⊃ topo ⊃ brute).
// ---------------------------------------------------------------------------

inline bool is_chain_shaped(const DenotationSystem& sys) {
  DiGraph g = dependency_graph(sys, {.include_free = true});
  for (const VarId& x : g.vertices())
    if (g.out_degree(x) > 1 || g.in_degree(x) > 1) return false;
  return is_cycle_free(g);
}

inline SolveOutcome solve_auto(const DenotationSystem& sys,
                               const Valuation& free_choice = {},
                               bool free_default = false) {
  if (is_chain_shaped(sys)) return solve_chain(sys, free_choice, free_default);
  DiGraph g = dependency_graph(sys, {.include_free = true});
  if (is_simply_connected(g)) return solve_simply_connected(sys, free_default);
  if (is_cycle_free(g)) return solve_topological(sys, free_choice, free_default);
  return solve_brute(sys);
}

}  // namespace semdep
