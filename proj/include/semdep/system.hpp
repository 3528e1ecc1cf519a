#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "semdep/errors.hpp"
#include "semdep/formula.hpp"
#include "semdep/graph.hpp"
#include "semdep/varid.hpp"

namespace semdep {

/// A denotation system (S, d): an ordered set of denoted vertices and one
/// formula per vertex saying what that vertex "means". Formulas may mention
/// variables outside S — those are the system's free variables and make the
/// system "open" (finite windows of infinite structures are open systems).
class DenotationSystem {
 public:
  DenotationSystem() = default;
  explicit DenotationSystem(std::string name) : name_(std::move(name)) {}

  void define(VarId vertex, Formula denotation) {
    if (defs_.count(vertex))
      throw PreconditionError("duplicate definition for vertex " + vertex.str());
    denoted_.push_back(vertex);
    defs_.emplace(std::move(vertex), std::move(denotation));
  }

  const std::string& name() const { return name_; }
  const std::vector<VarId>& denoted() const { return denoted_; }
  bool is_denoted(const VarId& v) const { return defs_.count(v) != 0; }

  const Formula& formula_of(const VarId& v) const {
    auto it = defs_.find(v);
    if (it == defs_.end())
      throw PreconditionError("vertex " + v.str() + " has no denotation");
    return it->second;
  }

  /// Free variables in order of first occurrence across the denoted formulas.
  std::vector<VarId> free_vars() const {
    std::vector<VarId> out;
    std::set<VarId> seen;
    for (const VarId& s : denoted_)
      for (const VarId& v : occurring_ordered(formula_of(s)))
        if (!defs_.count(v) && seen.insert(v).second) out.push_back(v);
    return out;
  }

  bool is_closed() const { return free_vars().empty(); }

  /// System vertex order: denoted vertices, then free variables. This order
  /// drives valuation enumeration and every deterministic tie-break.
  std::vector<VarId> all_vars() const {
    std::vector<VarId> out = denoted_;
    for (VarId& v : free_vars()) out.push_back(std::move(v));
    return out;
  }

  bool operator==(const DenotationSystem&) const = default;

 private:
  std::string name_;
  std::vector<VarId> denoted_;
  std::map<VarId, Formula> defs_;
};

struct AcceptabilityViolation {
  VarId vertex;
  bool expected;  // value of d(vertex) under the valuation
  bool got;       // value the valuation assigns to the vertex

  bool operator==(const AcceptabilityViolation&) const = default;
};

struct AcceptabilityReport {
  bool acceptable = true;
  std::vector<AcceptabilityViolation> violations;
};

/// Checks the fixpoint condition v(s) = [d(s)]_v on every denoted vertex.
/// The valuation must cover denoted and free variables alike.
inline AcceptabilityReport check_acceptable(const DenotationSystem& sys,
                                            const Valuation& v) {
  for (const VarId& x : sys.all_vars())
    if (!v.contains(x))
      throw PreconditionError("valuation is partial: missing " + x.str());
  AcceptabilityReport report;
  for (const VarId& s : sys.denoted()) {
    bool expected = eval(sys.formula_of(s), v);
    bool got = v.at(s);
    if (expected != got) {
      report.acceptable = false;
      report.violations.push_back({s, expected, got});
    }
  }
  return report;
}

struct DependencyGraphOptions {
  bool include_free = false;  // add free variables as sink vertices
};

/// The dependency graph: vertices are the denoted set (plus free variables
/// as sinks when requested), with an edge s -> s' iff s' occurs syntactically
/// in d(s). Occurrence, not relevance, defines edges.
inline DiGraph dependency_graph(const DenotationSystem& sys,
                                DependencyGraphOptions opts = {}) {
  DiGraph g;
  for (const VarId& s : sys.denoted()) g.add_vertex(s);
  if (opts.include_free) {
    for (const VarId& v : sys.free_vars()) g.add_vertex(v);
  } else if (!sys.is_closed()) {
    std::string names;
    for (const VarId& v : sys.free_vars()) {
      if (!names.empty()) names += ", ";
      names += v.str();
    }
    throw PreconditionError("open system (free: " + names +
                            "); pass include_free to add them as sinks");
  }
  for (const VarId& s : sys.denoted())
    for (const VarId& t : occurring(sys.formula_of(s))) g.add_edge(s, t);
  return g;
}

// ---------------------------------------------------------------------------
// System file format:
//   optional header    system <name>
//   one line per vertex   ident = formula     (or "quoted" = formula)
// `#` comments, blank lines ignored, vertex order preserved.
// ---------------------------------------------------------------------------

struct ParseSystemOptions {
  bool allow_loops = false;  // permit d(x) to mention x itself
};

inline DenotationSystem parse_system(std::string_view text,
                                     ParseSystemOptions opts = {}) {
  DenotationSystem sys;
  bool saw_header = false, saw_vertex = false;
  for (const auto& [no, line] : detail::content_lines(text)) {
    detail::Lexer lex(line, no);
    detail::Token first = lex.next();
    if (first.kind == detail::Token::End) continue;
    if (first.kind != detail::Token::Ident && first.kind != detail::Token::Quoted)
      throw ParseError("expected a vertex name or 'system' header", first.line,
                       first.column);
    detail::Token second = lex.next();
    if (first.kind == detail::Token::Ident && first.text == "system" &&
        second.kind != detail::Token::Equals) {
      if (saw_header || saw_vertex)
        throw ParseError("misplaced 'system' header", first.line, first.column);
      if (second.kind != detail::Token::Ident &&
          second.kind != detail::Token::Quoted)
        throw ParseError("expected a system name", second.line, second.column);
      if (lex.next().kind != detail::Token::End)
        throw ParseError("unexpected input after system name", second.line,
                         second.column);
      sys = DenotationSystem(second.text);
      saw_header = true;
      continue;
    }
    if (second.kind != detail::Token::Equals)
      throw ParseError("expected '=' after vertex name", second.line,
                       second.column);
    // second.column is the 1-based position of '=' in this line.
    VarId vertex(first.text);
    Formula f = parse_formula(std::string_view(line).substr(second.column), no);
    if (sys.is_denoted(vertex))
      throw ParseError("duplicate vertex " + vertex.str(), first.line,
                       first.column);
    if (!opts.allow_loops && occurring(f).count(vertex))
      throw ParseError("vertex " + vertex.str() +
                           " mentions itself (loops are disallowed)",
                       first.line, first.column);
    sys.define(std::move(vertex), std::move(f));
    saw_vertex = true;
  }
  if (!saw_vertex && !saw_header)
    throw ParseError("empty system source", 1, 1);
  return sys;
}

/// Canonical rendering; parse_system(print_system(sys)) reproduces the
/// normalized system.
inline std::string print_system(const DenotationSystem& sys) {
  std::string out;
  if (!sys.name().empty()) out += "system " + format_ident(sys.name()) + "\n";
  for (const VarId& s : sys.denoted())
    out += format_ident(s) + " = " + print_formula(sys.formula_of(s)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Truncation boundary policies for finite windows of infinite structures.
// ---------------------------------------------------------------------------

enum class TruncationPolicy { Clip, GroundTrue, GroundFalse };

inline std::string to_string(TruncationPolicy p) {
  switch (p) {
    case TruncationPolicy::Clip: return "clip";
    case TruncationPolicy::GroundTrue: return "ground-true";
    case TruncationPolicy::GroundFalse: return "ground-false";
  }
  return "?";
}

namespace detail {

/// nullopt means "this subtree was clipped away".
inline std::optional<Formula> clip_rec(const Formula& f,
                                       const std::set<VarId>& out_of_range) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Var:
      if (out_of_range.count(f.var())) return std::nullopt;
      return f;
    case FormulaKind::Not: {
      auto k = clip_rec(f.child(), out_of_range);
      if (!k) return std::nullopt;
      return Formula::negate(std::move(*k));
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> kids;
      for (const Formula& raw : f.children()) {
        auto k = clip_rec(raw, out_of_range);
        if (k) kids.push_back(std::move(*k));
      }
      // Empty junctions survive as-is; a lone survivor stands alone.
      if (kids.size() == 1) return std::move(kids.front());
      return f.kind() == FormulaKind::And ? Formula::conj(std::move(kids))
                                          : Formula::disj(std::move(kids));
    }
  }
  throw std::logic_error("clip_rec: bad formula kind");
}

}  // namespace detail

/// Applies a truncation policy to a template formula whose out-of-range
/// references are listed explicitly. CLIP deletes the offending literals from
/// their enclosing junction (possibly leaving an empty one; a fully clipped
/// formula truncates to the empty conjunction); GROUND_c substitutes the
/// constant c for each out-of-range variable, without folding.
inline Formula apply_boundary_policy(const Formula& templ,
                                     const std::set<VarId>& out_of_range,
                                     TruncationPolicy policy) {
  if (policy == TruncationPolicy::Clip) {
    auto f = detail::clip_rec(templ, out_of_range);
    return f ? std::move(*f) : Formula::conj({});
  }
  const bool ground = policy == TruncationPolicy::GroundTrue;
  Formula f = templ;
  for (const VarId& v : out_of_range) f = substitute(f, v, ground);
  return f;
}

}  // namespace semdep
