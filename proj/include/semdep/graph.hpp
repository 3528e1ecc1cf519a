#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semdep/errors.hpp"
#include "semdep/varid.hpp"

namespace semdep {

/// Finite directed graph over VarId vertices. Vertex order is insertion
/// order and is significant (it drives every deterministic tie-break in the
/// library); edges are a set, so there are no parallel duplicates. Loops are
/// representable — predicates that exclude them say so.
class DiGraph {
 public:
  bool add_vertex(const VarId& v) {
    if (index_.count(v)) return false;
    index_.emplace(v, verts_.size());
    verts_.push_back(v);
    out_.emplace_back();
    in_.emplace_back();
    return true;
  }

  /// Adds the edge, inserting unseen endpoints in mention order.
  void add_edge(const VarId& from, const VarId& to) {
    add_vertex(from);
    add_vertex(to);
    out_[index_.at(from)].insert(index_.at(to));
    in_[index_.at(to)].insert(index_.at(from));
  }

  bool has_vertex(const VarId& v) const { return index_.count(v) != 0; }
  bool has_edge(const VarId& from, const VarId& to) const {
    auto i = index_.find(from);
    auto j = index_.find(to);
    if (i == index_.end() || j == index_.end()) return false;
    return out_[i->second].count(j->second) != 0;
  }

  std::size_t vertex_count() const { return verts_.size(); }
  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& s : out_) m += s.size();
    return m;
  }

  const std::vector<VarId>& vertices() const { return verts_; }

  std::size_t index_of(const VarId& v) const {
    auto it = index_.find(v);
    if (it == index_.end())
      throw PreconditionError("unknown vertex " + v.str());
    return it->second;
  }

  const VarId& vertex_at(std::size_t i) const { return verts_.at(i); }

  /// Successors in vertex order.
  std::vector<VarId> succ(const VarId& v) const { return resolve(out_[index_of(v)]); }
  std::vector<VarId> pred(const VarId& v) const { return resolve(in_[index_of(v)]); }

  const std::set<std::size_t>& succ_indices(std::size_t i) const { return out_.at(i); }
  const std::set<std::size_t>& pred_indices(std::size_t i) const { return in_.at(i); }

  std::size_t out_degree(const VarId& v) const { return out_[index_of(v)].size(); }
  std::size_t in_degree(const VarId& v) const { return in_[index_of(v)].size(); }

  void remove_edge(const VarId& from, const VarId& to) {
    out_[index_of(from)].erase(index_of(to));
    in_[index_of(to)].erase(index_of(from));
  }

  /// Edges ordered by (source index, target index).
  std::vector<std::pair<VarId, VarId>> edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (std::size_t i = 0; i < verts_.size(); ++i)
      for (std::size_t j : out_[i]) out.emplace_back(verts_[i], verts_[j]);
    return out;
  }

  /// Induced subgraph on the given vertices, keeping this graph's vertex order.
  DiGraph induced(const std::set<std::size_t>& keep) const {
    DiGraph g;
    for (std::size_t i = 0; i < verts_.size(); ++i)
      if (keep.count(i)) g.add_vertex(verts_[i]);
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (!keep.count(i)) continue;
      for (std::size_t j : out_[i])
        if (keep.count(j)) g.add_edge(verts_[i], verts_[j]);
    }
    return g;
  }

  bool operator==(const DiGraph& other) const {
    return verts_ == other.verts_ && out_ == other.out_;
  }

 private:
  std::vector<VarId> resolve(const std::set<std::size_t>& ids) const {
    std::vector<VarId> out;
    out.reserve(ids.size());
    for (std::size_t i : ids) out.push_back(verts_[i]);
    return out;
  }

  std::vector<VarId> verts_;
  std::map<VarId, std::size_t> index_;
  std::vector<std::set<std::size_t>> out_, in_;
};

/// Undirected graph; edges are unordered pairs stored normalized by vertex
/// index. Self-pairs are rejected (source digraphs carry loops, their shadows
/// do not re-introduce them).
class UndiGraph {
 public:
  bool add_vertex(const VarId& v) {
    if (index_.count(v)) return false;
    index_.emplace(v, verts_.size());
    verts_.push_back(v);
    adj_.emplace_back();
    return true;
  }

  void add_edge(const VarId& a, const VarId& b) {
    if (a == b) throw PreconditionError("undirected self-pair " + a.str());
    add_vertex(a);
    add_vertex(b);
    adj_[index_.at(a)].insert(index_.at(b));
    adj_[index_.at(b)].insert(index_.at(a));
  }

  bool has_vertex(const VarId& v) const { return index_.count(v) != 0; }
  bool has_edge(const VarId& a, const VarId& b) const {
    auto i = index_.find(a);
    auto j = index_.find(b);
    if (i == index_.end() || j == index_.end()) return false;
    return adj_[i->second].count(j->second) != 0;
  }

  std::size_t vertex_count() const { return verts_.size(); }
  std::size_t edge_count() const { return edges().size(); }
  const std::vector<VarId>& vertices() const { return verts_; }

  std::size_t index_of(const VarId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw PreconditionError("unknown vertex " + v.str());
    return it->second;
  }

  std::size_t degree(const VarId& v) const { return adj_[index_of(v)].size(); }

  /// Edges as (smaller index, larger index) pairs, ordered.
  std::vector<std::pair<VarId, VarId>> edges() const {
    std::vector<std::pair<VarId, VarId>> out;
    for (std::size_t i = 0; i < verts_.size(); ++i)
      for (std::size_t j : adj_[i])
        if (i < j) out.emplace_back(verts_[i], verts_[j]);
    return out;
  }

  bool operator==(const UndiGraph& other) const {
    return verts_ == other.verts_ && adj_ == other.adj_;
  }

 private:
  std::vector<VarId> verts_;
  std::map<VarId, std::size_t> index_;
  std::vector<std::set<std::size_t>> adj_;

  friend UndiGraph underlying(const DiGraph&);
};

/// Forgets edge orientation; anti-parallel pairs merge into one edge.
inline UndiGraph underlying(const DiGraph& g) {
  UndiGraph u;
  for (const VarId& v : g.vertices()) u.add_vertex(v);
  for (const auto& [a, b] : g.edges())
    if (a != b) u.add_edge(a, b);
  return u;
}

inline std::vector<VarId> succ(const DiGraph& g, const VarId& x) { return g.succ(x); }

/// Strict reachability set: every vertex on some nonempty path from x.
inline std::set<VarId> downward(const DiGraph& g, const VarId& x) {
  std::set<std::size_t> seen;
  std::deque<std::size_t> work(g.succ_indices(g.index_of(x)).begin(),
                               g.succ_indices(g.index_of(x)).end());
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    if (!seen.insert(i).second) continue;
    for (std::size_t j : g.succ_indices(i)) work.push_back(j);
  }
  std::set<VarId> out;
  for (std::size_t i : seen) out.insert(g.vertex_at(i));
  return out;
}

/// Induced subgraph on {x} ∪ downward(x).
inline DiGraph cone(const DiGraph& g, const VarId& x) {
  std::set<std::size_t> keep{g.index_of(x)};
  for (const VarId& v : downward(g, x)) keep.insert(g.index_of(v));
  return g.induced(keep);
}

inline bool is_transitive(const DiGraph& g) {
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    for (std::size_t j : g.succ_indices(i))
      for (std::size_t k : g.succ_indices(j))
        if (!g.succ_indices(i).count(k)) return false;
  return true;
}

/// Least transitive supergraph on the same vertex set.
inline DiGraph transitive_closure(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : g.succ_indices(i)) reach[i][j] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (reach[k][j]) reach[i][j] = true;
    }
  DiGraph out;
  for (const VarId& v : g.vertices()) out.add_vertex(v);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) out.add_edge(g.vertex_at(i), g.vertex_at(j));
  return out;
}

/// True iff the graph has no directed cycle. Loops and 2-cycles count.
inline bool is_cycle_free(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : g.succ_indices(i)) ++indeg[j];
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t removed = 0;
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.pop_front();
    ++removed;
    for (std::size_t j : g.succ_indices(i))
      if (--indeg[j] == 0) ready.push_back(j);
  }
  return removed == n;
}

/// Topological order (dependencies last). Throws on cyclic input.
inline std::vector<std::size_t> topological_order(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : g.succ_indices(i)) ++indeg[j];
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.insert(i);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(i);
    for (std::size_t j : g.succ_indices(i))
      if (--indeg[j] == 0) ready.insert(j);
  }
  if (order.size() != n)
    throw PreconditionError("graph is cyclic: no topological order");
  return order;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t(0));
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  /// Returns false if the two were already connected.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // smaller index wins: stable class reps
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// At most one undirected path between any two vertices. For directed input
/// this is: no loops, no anti-parallel pair, and an acyclic shadow. The two
/// extra clauses make the cycle-free assumption explicit that the shadow
/// test alone would miss (a 2-cycle's shadow is a single edge).
inline bool is_simply_connected(const DiGraph& g) {
  detail::UnionFind uf(g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    for (std::size_t j : g.succ_indices(i)) {
      if (i == j) return false;                      // loop
      if (g.succ_indices(j).count(i)) return false;  // anti-parallel pair
      if (!uf.unite(i, j)) return false;             // shadow cycle
    }
  }
  return true;
}

inline bool has_undirected_cycle(const UndiGraph& u) {
  detail::UnionFind uf(u.vertex_count());
  for (const auto& [a, b] : u.edges())
    if (!uf.unite(u.index_of(a), u.index_of(b))) return true;
  return false;
}

/// Weakly connected components with their induced directed edges, ordered by
/// smallest member vertex index; each component keeps the original order.
inline std::vector<DiGraph> components(const DiGraph& g) {
  detail::UnionFind uf(g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    for (std::size_t j : g.succ_indices(i)) uf.unite(i, j);
  std::map<std::size_t, std::set<std::size_t>> classes;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) classes[uf.find(i)].insert(i);
  std::vector<DiGraph> out;
  out.reserve(classes.size());
  for (const auto& [root, members] : classes) out.push_back(g.induced(members));
  return out;
}

/// Edge-preserving map check: every edge xy of g must land on an edge
/// f(x)f(y) of h. Throws if f misses a vertex of g or maps outside V(h).
inline bool is_homomorphism(const DiGraph& g, const DiGraph& h,
                            const std::map<VarId, VarId>& f,
                            std::pair<VarId, VarId>* violating_edge = nullptr) {
  for (const VarId& v : g.vertices()) {
    auto it = f.find(v);
    if (it == f.end())
      throw PreconditionError("map is partial: no image for " + v.str());
    if (!h.has_vertex(it->second))
      throw PreconditionError("map image " + it->second.str() +
                              " is not a vertex of the target graph");
  }
  for (const auto& [a, b] : g.edges()) {
    if (!h.has_edge(f.at(a), f.at(b))) {
      if (violating_edge) *violating_edge = {a, b};
      return false;
    }
  }
  return true;
}

/// Image graph of f: vertices in first-appearance order over g's vertex
/// order, edges f(x)→f(y) for each edge x→y. An edge whose endpoints collapse
/// to the same image vertex would create a loop and is an error.
inline DiGraph collapse(const DiGraph& g, const std::map<VarId, VarId>& f) {
  for (const VarId& v : g.vertices())
    if (!f.count(v))
      throw PreconditionError("map is partial: no image for " + v.str());
  DiGraph out;
  for (const VarId& v : g.vertices()) out.add_vertex(f.at(v));
  for (const auto& [a, b] : g.edges()) {
    if (f.at(a) == f.at(b))
      throw PreconditionError("collapse would create a loop at " +
                              f.at(a).str() + " (edge " + a.str() + " -> " +
                              b.str() + ")");
    out.add_edge(f.at(a), f.at(b));
  }
  return out;
}

/// Calls fn with every orientation of u (2^|E| of them; hard cap |E| <= 16).
/// fn returns false to stop early. Edge direction bit 0 means
/// smaller-index -> larger-index. Returns the number of orientations visited.
inline std::uint64_t enumerate_orientations(
    const UndiGraph& u, const std::function<bool(const DiGraph&)>& fn) {
  const auto edge_list = u.edges();
  if (edge_list.size() > 16)
    throw BudgetExceeded("orientation enumeration: " +
                         std::to_string(edge_list.size()) +
                         " edges exceeds the budget of 16");
  const std::uint64_t total = std::uint64_t(1) << edge_list.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    DiGraph g;
    for (const VarId& v : u.vertices()) g.add_vertex(v);
    for (std::size_t e = 0; e < edge_list.size(); ++e) {
      const auto& [a, b] = edge_list[e];
      if ((mask >> e) & 1)
        g.add_edge(b, a);
      else
        g.add_edge(a, b);
    }
    if (!fn(g)) return mask + 1;
  }
  return total;
}

inline std::vector<DiGraph> orientations(const UndiGraph& u) {
  std::vector<DiGraph> out;
  enumerate_orientations(u, [&](const DiGraph& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Text formats.
//   directed graph:  lines `a -> b`; a bare `a` declares an isolated vertex
//   undirected:      lines `a -- b`
//   vertex map:      lines `a -> b` meaning f(a) = b
// Identifier lexics as in formulas; `#` comments; blank lines ignored.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::pair<std::size_t, std::string>> content_lines(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t line_no = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line = end == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, end - start);
    out.emplace_back(line_no, std::string(line));
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++line_no;
  }
  return out;
}

/// Reads `ident (sep ident)?` from one line; returns the endpoint names.
inline std::optional<std::pair<std::string, std::optional<std::string>>>
parse_edge_line(const std::string& line, std::size_t line_no, Token::Kind sep,
                const char* sep_name) {
  Lexer lex(line, line_no);
  Token t = lex.next();
  if (t.kind == Token::End) return std::nullopt;  // blank / comment-only
  if (t.kind != Token::Ident && t.kind != Token::Quoted)
    throw ParseError("expected a vertex name", t.line, t.column);
  std::string a = t.text;
  Token mid = lex.next();
  if (mid.kind == Token::End) return {{a, std::nullopt}};
  if (mid.kind != sep)
    throw ParseError(std::string("expected '") + sep_name + "'", mid.line,
                     mid.column);
  Token u = lex.next();
  if (u.kind != Token::Ident && u.kind != Token::Quoted)
    throw ParseError("expected a vertex name", u.line, u.column);
  Token end = lex.next();
  if (end.kind != Token::End)
    throw ParseError("unexpected trailing input '" + end.text + "'", end.line,
                     end.column);
  return {{a, u.text}};
}

}  // namespace detail

inline DiGraph parse_digraph(std::string_view text) {
  DiGraph g;
  for (const auto& [no, line] : detail::content_lines(text)) {
    auto parsed = detail::parse_edge_line(line, no, detail::Token::Arrow, "->");
    if (!parsed) continue;
    if (parsed->second)
      g.add_edge(VarId(parsed->first), VarId(*parsed->second));
    else
      g.add_vertex(VarId(parsed->first));
  }
  return g;
}

inline UndiGraph parse_ugraph(std::string_view text) {
  UndiGraph g;
  for (const auto& [no, line] : detail::content_lines(text)) {
    auto parsed =
        detail::parse_edge_line(line, no, detail::Token::DoubleDash, "--");
    if (!parsed) continue;
    if (parsed->second)
      g.add_edge(VarId(parsed->first), VarId(*parsed->second));
    else
      g.add_vertex(VarId(parsed->first));
  }
  return g;
}

inline std::map<VarId, VarId> parse_vertex_map(std::string_view text) {
  std::map<VarId, VarId> f;
  for (const auto& [no, line] : detail::content_lines(text)) {
    auto parsed = detail::parse_edge_line(line, no, detail::Token::Arrow, "->");
    if (!parsed) continue;
    if (!parsed->second)
      throw ParseError("map line needs 'source -> target'", no, 1);
    VarId src(parsed->first);
    if (f.count(src))
      throw ParseError("duplicate map entry for " + src.str(), no, 1);
    f.emplace(std::move(src), VarId(*parsed->second));
  }
  return f;
}

inline std::string print_digraph(const DiGraph& g) {
  std::string out;
  std::set<VarId> touched;
  for (const auto& [a, b] : g.edges()) {
    touched.insert(a);
    touched.insert(b);
    out += format_ident(a) + " -> " + format_ident(b) + "\n";
  }
  for (const VarId& v : g.vertices())
    if (!touched.count(v)) out += format_ident(v) + "\n";
  return out;
}

inline std::string print_ugraph(const UndiGraph& g) {
  std::string out;
  std::set<VarId> touched;
  for (const auto& [a, b] : g.edges()) {
    touched.insert(a);
    touched.insert(b);
    out += format_ident(a) + " -- " + format_ident(b) + "\n";
  }
  for (const VarId& v : g.vertices())
    if (!touched.count(v)) out += format_ident(v) + "\n";
  return out;
}

namespace detail {
inline std::string dot_quote(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}
}  // namespace detail

/// DOT rendering: one node line per vertex, one edge per line. Edges in
/// `marked` carry [style=dashed] (used for negated dependencies).
inline std::string to_dot(const DiGraph& g,
                          const std::set<std::pair<VarId, VarId>>& marked = {}) {
  std::string out = "digraph G {\n";
  for (const VarId& v : g.vertices())
    out += "  " + detail::dot_quote(v.str()) + ";\n";
  for (const auto& e : g.edges()) {
    out += "  " + detail::dot_quote(e.first.str()) + " -> " +
           detail::dot_quote(e.second.str());
    if (marked.count(e)) out += " [style=dashed]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace semdep
