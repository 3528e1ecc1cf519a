#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semdep/errors.hpp"
#include "semdep/formula.hpp"
#include "semdep/graph.hpp"
#include "semdep/solve.hpp"
#include "semdep/system.hpp"

namespace semdep {

struct DangerLimits {
  std::size_t max_vertices = 5;
  std::size_t max_out_degree = 3;
};

/// One denotation candidate up to logical equivalence: a truth table per
/// vertex over that vertex's successors in vertex order. Row r holds the
/// value when successor i carries bit (k-1-i) of r, so row 0 is the
/// all-successors-false row; the serialized bit-string lists rows 0..2^k-1.
using DenotationCandidate = std::map<VarId, std::vector<bool>>;

struct DangerReport {
  bool dangerous = false;
  std::optional<DenotationCandidate> witness;
  std::uint64_t candidates_tried = 0;
  DangerLimits limits;
};

/// Turns a candidate into a concrete system: d(x) is the Shannon expansion of
/// x's table over succ(x), so every successor occurs syntactically and the
/// dependency graph of the result is exactly g.
inline DenotationSystem realize_candidate(const DiGraph& g,
                                          const DenotationCandidate& c) {
  DenotationSystem sys;
  for (const VarId& x : g.vertices()) {
    auto it = c.find(x);
    if (it == c.end())
      throw PreconditionError("candidate has no table for vertex " + x.str());
    const std::vector<VarId> succ = g.succ(x);
    if (it->second.size() != (std::size_t(1) << succ.size()))
      throw PreconditionError("table for " + x.str() + " has " +
                              std::to_string(it->second.size()) +
                              " rows, expected " +
                              std::to_string(std::size_t(1) << succ.size()));
    sys.define(x, from_truth_table(succ, it->second));
  }
  return sys;
}

namespace detail {

inline std::vector<bool> table_from_counter(std::uint64_t counter,
                                            std::size_t rows) {
  std::vector<bool> table(rows);
  for (std::size_t r = 0; r < rows; ++r)
    table[r] = (counter >> (rows - 1 - r)) & 1;
  return table;
}

}  // namespace detail

/// Exhaustive dangerousness decision: sweeps every denotation candidate
/// (vertex order, each table counting up as a binary number) and reports the
/// first one whose realized system is paradoxical. Two denotations with equal
/// tables yield equisatisfiable fixpoint systems, so the table space decides;
/// each candidate is checked by exhaustive valuation enumeration, and a found
/// witness is additionally realized and re-confirmed through solve_brute.
inline DangerReport is_dangerous(const DiGraph& g, DangerLimits limits = {}) {
  DangerReport report;
  report.limits = limits;
  const std::size_t n = g.vertex_count();
  if (n > limits.max_vertices || n > kBruteVariableBudget)
    throw BudgetExceeded("is_dangerous: " + std::to_string(n) +
                         " vertices exceed the budget of " +
                         std::to_string(std::min(limits.max_vertices,
                                                 kBruteVariableBudget)));
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i) {
    succ[i].assign(g.succ_indices(i).begin(), g.succ_indices(i).end());
    // Out-degree 6 would already mean 2^64 tables for one vertex.
    if (succ[i].size() > limits.max_out_degree || succ[i].size() > 5)
      throw BudgetExceeded("is_dangerous: out-degree of " +
                           g.vertex_at(i).str() + " exceeds the budget of " +
                           std::to_string(std::min<std::size_t>(
                               limits.max_out_degree, 5)));
  }

  std::vector<std::size_t> rows(n);
  std::vector<std::uint64_t> table_space(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = std::size_t(1) << succ[i].size();
    table_space[i] = std::uint64_t(1) << rows[i];
  }

  // Valuations are bitmasks with vertex i at bit (n-1-i), matching
  // solve_brute's lexicographic order.
  auto vertex_bit = [&](std::uint64_t v, std::size_t i) -> bool {
    return (v >> (n - 1 - i)) & 1;
  };
  auto row_of = [&](std::uint64_t v, std::size_t i) -> std::size_t {
    std::size_t r = 0;
    const auto& s = succ[i];
    for (std::size_t j = 0; j < s.size(); ++j)
      r |= std::size_t(vertex_bit(v, s[j])) << (s.size() - 1 - j);
    return r;
  };

  std::vector<std::uint64_t> counter(n, 0);
  const std::uint64_t total_valuations = std::uint64_t(1) << n;
  while (true) {
    ++report.candidates_tried;
    bool satisfiable = false;
    for (std::uint64_t v = 0; v < total_valuations && !satisfiable; ++v) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        bool table_val = (counter[i] >> (rows[i] - 1 - row_of(v, i))) & 1;
        ok = table_val == vertex_bit(v, i);
      }
      satisfiable = ok;
    }
    if (!satisfiable) {
      DenotationCandidate witness;
      for (std::size_t i = 0; i < n; ++i)
        witness.emplace(g.vertex_at(i),
                        detail::table_from_counter(counter[i], rows[i]));
      if (solve_brute(realize_candidate(g, witness)).status !=
          SolveStatus::Paradoxical)
        throw std::logic_error(
            "internal: table-level paradox not confirmed by solve_brute");
      report.dangerous = true;
      report.witness = std::move(witness);
      return report;
    }
    // Advance the odometer: last vertex's table counts fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++counter[pos] < table_space[pos]) break;
      counter[pos] = 0;
      if (pos == 0) return report;  // swept everything
    }
    if (n == 0) return report;  // empty graph has the single empty candidate
  }
}

struct OrientationSweepReport {
  bool exists = false;
  std::optional<DiGraph> witness;
  std::uint64_t orientations_tried = 0;
  DangerLimits limits;
};

/// Theorem-24 style sweep: enumerates every orientation of u and applies
/// is_dangerous to each; reports the first dangerous one.
inline OrientationSweepReport dangerous_orientation_exists(
    const UndiGraph& u, DangerLimits limits = {}) {
  OrientationSweepReport report;
  report.limits = limits;
  if (u.vertex_count() > limits.max_vertices)
    throw BudgetExceeded("dangerous_orientation_exists: " +
                         std::to_string(u.vertex_count()) +
                         " vertices exceed the budget of " +
                         std::to_string(limits.max_vertices));
  for (const VarId& v : u.vertices())
    if (u.degree(v) > limits.max_out_degree)
      throw BudgetExceeded(
          "dangerous_orientation_exists: degree of " + v.str() +
          " exceeds the out-degree budget of " +
          std::to_string(limits.max_out_degree) +
          " in some orientation");
  report.orientations_tried =
      enumerate_orientations(u, [&](const DiGraph& oriented) {
        if (is_dangerous(oriented, limits).dangerous) {
          report.exists = true;
          report.witness = oriented;
          return false;
        }
        return true;
      });
  return report;
}

}  // namespace semdep
