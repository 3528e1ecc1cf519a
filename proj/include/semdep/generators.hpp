#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semdep/errors.hpp"
#include "semdep/formula.hpp"
#include "semdep/system.hpp"

namespace semdep {

namespace detail {

inline void check_range(const char* op, std::size_t n, std::size_t lo,
                        std::size_t hi) {
  if (n < lo || n > hi)
    throw BudgetExceeded(std::string(op) + ": n must be in [" +
                         std::to_string(lo) + ", " + std::to_string(hi) +
                         "], got " + std::to_string(n));
}

inline VarId y_vertex(std::size_t i) { return VarId("Y" + std::to_string(i)); }

inline VarId triple_vertex(std::size_t i, std::size_t j, std::size_t k) {
  return VarId("(Y" + std::to_string(i) + ",Y" + std::to_string(j) + ",Y" +
               std::to_string(k) + ")");
}

inline VarId chain_vertex(std::size_t i) {
  return VarId("<Y" + std::to_string(i) + ">");
}

}  // namespace detail

/// Truncated Yablo structure: Y1..Yn with d(Yi) = ⋀{¬Yj : i < j}. References
/// past the window (index n+1 stands in for the clipped tail) go through the
/// boundary policy; under CLIP they simply vanish, so d(Yn) is the empty
/// conjunction. The graph is transitive.
inline DenotationSystem gen_yablo(std::size_t n,
                                  TruncationPolicy policy = TruncationPolicy::Clip) {
  detail::check_range("gen_yablo", n, 1, 16);
  DenotationSystem sys("yablo" + std::to_string(n));
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Formula> conjuncts;
    for (std::size_t j = i + 1; j <= n + 1; ++j)
      conjuncts.push_back(Formula::negate(Formula::var(detail::y_vertex(j))));
    Formula templ = Formula::conj(std::move(conjuncts));
    sys.define(detail::y_vertex(i),
               apply_boundary_policy(templ, {detail::y_vertex(n + 1)}, policy));
  }
  return sys;
}

/// The modified Yablo graph: long arrows are factorized through triple
/// vertices "(Yi,Yj,Yk)" (i < k < j), so every edge connects consecutive
/// levels. Denotations:
///   d(Yi)          = ¬Y(i+1) ∧ ⋀{¬(Yi,Yj,Y(i+1)) : i+2 ≤ j}
///   d(Yi,Yj,Yk)    = (Yi,Yj,Yk+1)            for k < j-1
///   d(Yi,Yj,Yj-1)  = Yj
inline DenotationSystem gen_ygprime(std::size_t n,
                                    TruncationPolicy policy = TruncationPolicy::Clip) {
  detail::check_range("gen_ygprime", n, 3, 8);
  DenotationSystem sys("ygprime" + std::to_string(n));
  std::set<VarId> out_of_range{detail::y_vertex(n + 1)};
  for (std::size_t i = 1; i <= n; ++i)
    out_of_range.insert(detail::triple_vertex(i, n + 1, i + 1));
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Formula> conjuncts;
    conjuncts.push_back(Formula::negate(Formula::var(detail::y_vertex(i + 1))));
    for (std::size_t j = i + 2; j <= n + 1; ++j)
      conjuncts.push_back(
          Formula::negate(Formula::var(detail::triple_vertex(i, j, i + 1))));
    sys.define(detail::y_vertex(i),
               apply_boundary_policy(Formula::conj(std::move(conjuncts)),
                                     out_of_range, policy));
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 2; j <= n; ++j)
      for (std::size_t k = i + 1; k < j; ++k) {
        Formula d = k < j - 1
                        ? Formula::var(detail::triple_vertex(i, j, k + 1))
                        : Formula::var(detail::y_vertex(j));
        sys.define(detail::triple_vertex(i, j, k), std::move(d));
      }
  return sys;
}

/// The collapsed image of the modified Yablo graph: a pure successor chain
/// <Y1> -> ... -> <Yn> with identity denotations; the terminal vertex takes ⊤
/// to close the finite window.
inline DenotationSystem gen_ygpp(std::size_t n) {
  detail::check_range("gen_ygpp", n, 1, 24);
  DenotationSystem sys("ygpp" + std::to_string(n));
  for (std::size_t i = 1; i <= n; ++i) {
    Formula d = i < n ? Formula::var(detail::chain_vertex(i + 1)) : Formula::tru();
    sys.define(detail::chain_vertex(i), std::move(d));
  }
  return sys;
}

/// The collapse map f(Yk) = f((Yi,Yj,Yk)) = <Yk>.
inline std::map<VarId, VarId> yg_collapse_map(std::size_t n) {
  detail::check_range("yg_collapse_map", n, 3, 8);
  std::map<VarId, VarId> f;
  for (std::size_t k = 1; k <= n; ++k)
    f.emplace(detail::y_vertex(k), detail::chain_vertex(k));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 2; j <= n; ++j)
      for (std::size_t k = i + 1; k < j; ++k)
        f.emplace(detail::triple_vertex(i, j, k), detail::chain_vertex(k));
  return f;
}

/// Finitely branching replacement attempt for the Yablo structure:
///   d(Yi) = ¬Y(i+1) ∧ X(i+2),   d(Xi) = ¬Yi ∧ X(i+1)     (X3..Xn)
/// Under GROUND_FALSE the all-false "procrastinating" valuation is
/// acceptable.
inline DenotationSystem gen_only_negative(
    std::size_t n, TruncationPolicy policy = TruncationPolicy::GroundFalse) {
  detail::check_range("gen_only_negative", n, 4, 16);
  auto x_vertex = [](std::size_t i) { return VarId("X" + std::to_string(i)); };
  std::set<VarId> out_of_range{detail::y_vertex(n + 1), x_vertex(n + 1),
                               x_vertex(n + 2)};
  DenotationSystem sys("only-negative" + std::to_string(n));
  for (std::size_t i = 1; i <= n; ++i) {
    Formula templ = Formula::conj(
        {Formula::negate(Formula::var(detail::y_vertex(i + 1))),
         Formula::var(x_vertex(i + 2))});
    sys.define(detail::y_vertex(i),
               apply_boundary_policy(templ, out_of_range, policy));
  }
  for (std::size_t i = 3; i <= n; ++i) {
    Formula templ =
        Formula::conj({Formula::negate(Formula::var(detail::y_vertex(i))),
                       Formula::var(x_vertex(i + 1))});
    sys.define(x_vertex(i), apply_boundary_policy(templ, out_of_range, policy));
  }
  return sys;
}

enum class ChainFormTag { Next, NotNext, ConstTrue, ConstFalse };

inline std::string to_string(ChainFormTag t) {
  switch (t) {
    case ChainFormTag::Next: return "next";
    case ChainFormTag::NotNext: return "not";
    case ChainFormTag::ConstTrue: return "const_true";
    case ChainFormTag::ConstFalse: return "const_false";
  }
  return "?";
}

/// Integer-segment chain x1..xn, one form tag per vertex. Non-terminal
/// constants are realized as successor-mentioning tautologies/contradictions
/// so the chain's edge set is preserved; a closed chain must end in a bare
/// constant, an open chain's last vertex references the free variable
/// x(n+1).
inline DenotationSystem gen_chain(const std::vector<ChainFormTag>& spec,
                                  bool open_end = false) {
  if (spec.empty() || spec.size() > 20)
    throw BudgetExceeded("gen_chain: spec length must be in [1, 20]");
  auto vertex = [](std::size_t i) { return VarId("x" + std::to_string(i)); };
  DenotationSystem sys("chain" + std::to_string(spec.size()));
  for (std::size_t i = 1; i <= spec.size(); ++i) {
    const bool terminal = i == spec.size();
    if (terminal && !open_end) {
      switch (spec[i - 1]) {
        case ChainFormTag::ConstTrue:
          sys.define(vertex(i), Formula::tru());
          break;
        case ChainFormTag::ConstFalse:
          sys.define(vertex(i), Formula::fls());
          break;
        default:
          throw PreconditionError(
              "gen_chain: a closed chain must end in const_true/const_false");
      }
      continue;
    }
    Formula next = Formula::var(vertex(i + 1));
    Formula d = Formula::tru();
    switch (spec[i - 1]) {
      case ChainFormTag::Next:
        d = next;
        break;
      case ChainFormTag::NotNext:
        d = Formula::negate(next);
        break;
      case ChainFormTag::ConstTrue:
        d = Formula::disj({next, Formula::negate(next)});
        break;
      case ChainFormTag::ConstFalse:
        d = Formula::conj({next, Formula::negate(next)});
        break;
    }
    sys.define(vertex(i), std::move(d));
  }
  return sys;
}

/// Complete tree with all arrows pointing to the root and ⋀− denotations:
/// every non-root vertex denotes ¬parent, the root the empty conjunction.
/// Vertices are named n1.. in breadth-first order.
inline DenotationSystem gen_tree_to_root(std::size_t branching,
                                         std::size_t depth) {
  if (branching < 1) throw BudgetExceeded("gen_tree_to_root: branching >= 1");
  std::size_t count = 1, level = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    level *= branching;
    count += level;
    if (count > 200)
      throw BudgetExceeded("gen_tree_to_root: more than 200 vertices");
  }
  auto vertex = [](std::size_t i) { return VarId("n" + std::to_string(i)); };
  DenotationSystem sys("tree" + std::to_string(branching) + "x" +
                       std::to_string(depth));
  sys.define(vertex(1), Formula::conj({}));
  // BFS numbering: children of vertex i are b*(i-1)+2 .. b*(i-1)+b+1.
  for (std::size_t i = 2; i <= count; ++i) {
    std::size_t parent = (i - 2) / branching + 1;
    sys.define(vertex(i), Formula::negate(Formula::var(vertex(parent))));
  }
  return sys;
}

namespace detail {

/// Deterministic helper over std::mt19937_64 (avoids distribution classes so
/// outputs are stable across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  bool flip() { return engine_() & 1; }

 private:
  std::mt19937_64 engine_;
};

/// Random formula that mentions exactly the given variables (each at least
/// once). Splits the list into junctions down to literal leaves; a leaf is
/// occasionally a tautology/contradiction over its variable so the solver's
/// irrelevance pruning has something to erase.
inline Formula random_formula_over(Rng& rng, std::vector<VarId> vars,
                                   std::size_t depth_left) {
  if (vars.empty()) return Formula::constant(rng.flip());
  if (vars.size() == 1) {
    const VarId& v = vars.front();
    switch (rng.below(8)) {
      case 0:
        return Formula::disj({Formula::var(v), Formula::negate(Formula::var(v))});
      case 1:
        return Formula::conj({Formula::var(v), Formula::negate(Formula::var(v))});
      case 2:
      case 3:
        return Formula::negate(Formula::var(v));
      default:
        return Formula::var(v);
    }
  }
  if (depth_left == 0) {
    // Flat junction over all remaining variables.
    std::vector<Formula> lits;
    for (const VarId& v : vars)
      lits.push_back(rng.flip() ? Formula::negate(Formula::var(v))
                                : Formula::var(v));
    return rng.flip() ? Formula::conj(std::move(lits))
                      : Formula::disj(std::move(lits));
  }
  std::size_t cut = 1 + rng.below(vars.size() - 1);
  std::vector<VarId> left(vars.begin(), vars.begin() + cut);
  std::vector<VarId> right(vars.begin() + cut, vars.end());
  std::vector<Formula> kids;
  kids.push_back(random_formula_over(rng, std::move(left), depth_left - 1));
  kids.push_back(random_formula_over(rng, std::move(right), depth_left - 1));
  Formula f = rng.flip() ? Formula::conj(std::move(kids))
                         : Formula::disj(std::move(kids));
  if (rng.below(4) == 0) f = Formula::negate(std::move(f));
  return f;
}

}  // namespace detail

/// Seed-deterministic closed system whose dependency graph is simply
/// connected: a random forest shape with randomized edge directions (any
/// orientation of a forest is acyclic and anti-parallel-free), then a random
/// formula over each vertex's successors.
inline DenotationSystem gen_random_simply_connected(std::size_t n,
                                                    std::uint64_t seed,
                                                    std::size_t max_formula_depth = 4) {
  detail::check_range("gen_random_simply_connected", n, 1, 12);
  detail::Rng rng(seed);
  auto vertex = [](std::size_t i) { return VarId("v" + std::to_string(i)); };
  std::vector<std::vector<std::size_t>> succ(n + 1);
  for (std::size_t i = 2; i <= n; ++i) {
    std::size_t pick = rng.below(i);  // 0 starts a new tree
    if (pick == 0) continue;
    if (rng.flip())
      succ[i].push_back(pick);
    else
      succ[pick].push_back(i);
  }
  DenotationSystem sys("random-sc-" + std::to_string(seed));
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<VarId> targets;
    for (std::size_t j : succ[i]) targets.push_back(vertex(j));
    sys.define(vertex(i),
               detail::random_formula_over(rng, std::move(targets),
                                           max_formula_depth));
  }
  return sys;
}

}  // namespace semdep
