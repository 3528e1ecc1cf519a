// semdep — command-line front end for the semantic dependency system library.
//
// Machine-readable result documents (JSON) go to stdout, human summaries to
// stderr, so pipelines never mix them. Exit codes: 0 success, 2 bad input or
// violated precondition/budget, 3 paradox/danger found under the
// corresponding --fail-on flag.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semdep/semdep.hpp"
#include "semdep/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace semdep;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{2, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{2, "cannot write " + path};
  out << content;
  if (!out) throw CliError{2, "cannot write " + path};
}

/// 64-bit FNV-1a over the raw bytes of all inputs, in argument order, with a
/// NUL fed between files. Content only — paths do not influence the digest.
class Digest {
 public:
  void feed(const std::string& bytes) {
    for (unsigned char c : bytes) mix(c);
    mix(0);
  }
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4)
      out.push_back(digits[(state_ >> shift) & 0xF]);
    return out;
  }

 private:
  void mix(unsigned char c) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

struct DocumentContext {
  std::string command;
  Digest digest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void emit(const DocumentContext& ctx, json payload, const std::string& summary) {
  json doc;
  doc["tool_version"] = kToolVersion;
  doc["command"] = ctx.command;
  doc["input_digest"] = ctx.digest.hex();
  doc["payload"] = std::move(payload);
  doc["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                ctx.start)
          .count();
  std::cout << doc.dump(2) << "\n";
  std::cerr << summary << "\n";
}

json valuation_json(const DenotationSystem& sys, const Valuation& v) {
  json out = json::object();
  for (const VarId& x : sys.all_vars()) out[x.str()] = v.at(x);
  return out;
}

json stats_json(const SolveStats& stats) {
  return json{{"valuations_tried", stats.valuations_tried},
              {"edges_erased", stats.edges_erased},
              {"choices_made", stats.choices_made}};
}

json outcome_json(const DenotationSystem& sys, const SolveOutcome& out) {
  json payload;
  payload["status"] =
      out.status == SolveStatus::Acceptable ? "acceptable" : "paradoxical";
  payload["method"] = out.method;
  payload["valuation"] =
      out.valuation ? valuation_json(sys, *out.valuation) : json(nullptr);
  payload["stats"] = stats_json(out.stats);
  return payload;
}

std::string bitstring(const std::vector<bool>& table) {
  std::string s;
  for (bool b : table) s.push_back(b ? '1' : '0');
  return s;
}

json limits_json(const DangerLimits& limits) {
  return json{{"max_vertices", limits.max_vertices},
              {"max_out_degree", limits.max_out_degree}};
}

/// Occurrences of `target` under an odd number of negations in `f`.
bool negates(const Formula& f, const VarId& target, bool negated = false) {
  switch (f.kind()) {
    case FormulaKind::Var:
      return negated && f.var() == target;
    case FormulaKind::Not:
      return negates(f.child(), target, !negated);
    case FormulaKind::And:
    case FormulaKind::Or:
      for (const Formula& k : f.children())
        if (negates(k, target, negated)) return true;
      return false;
    default:
      return false;
  }
}

DenotationSystem load_system(const std::string& path, DocumentContext& ctx,
                             bool allow_loops) {
  std::string text = read_file(path);
  ctx.digest.feed(text);
  return parse_system(text, {.allow_loops = allow_loops});
}

DiGraph load_digraph(const std::string& path, DocumentContext& ctx) {
  std::string text = read_file(path);
  ctx.digest.feed(text);
  return parse_digraph(text);
}

// ---------------------------------------------------------------------------
// Subcommand implementations. Each returns the process exit code.
// ---------------------------------------------------------------------------

int cmd_parse(const std::string& path, bool allow_loops) {
  DocumentContext ctx{"parse"};
  DenotationSystem sys = load_system(path, ctx, allow_loops);
  DiGraph g = dependency_graph(sys, {.include_free = true});
  std::vector<VarId> free = sys.free_vars();
  json payload;
  payload["name"] = sys.name().empty() ? json(nullptr) : json(sys.name());
  payload["vertices"] = sys.denoted().size();
  payload["edges"] = g.edge_count();
  payload["closed"] = free.empty();
  json free_names = json::array();
  for (const VarId& v : free) free_names.push_back(v.str());
  payload["free"] = std::move(free_names);
  payload["normalized"] = print_system(sys);
  emit(ctx, std::move(payload),
       "parsed " + std::to_string(sys.denoted().size()) + " vertices, " +
           std::to_string(g.edge_count()) + " edges (" +
           (free.empty() ? "closed" : "open") + ")");
  return 0;
}

int cmd_solve(const std::string& path, const std::string& method,
              bool allow_loops, bool free_choice, bool fail_on_paradox) {
  DocumentContext ctx{"solve"};
  DenotationSystem sys = load_system(path, ctx, allow_loops);
  SolveOutcome out;
  if (method == "auto") {
    out = solve_auto(sys, {}, free_choice);
  } else if (method == "brute") {
    out = solve_brute(sys);
  } else if (method == "topo") {
    out = solve_topological(sys, {}, free_choice);
  } else if (method == "simply") {
    out = solve_simply_connected(sys, free_choice);
  } else if (method == "chain") {
    out = solve_chain(sys, {}, free_choice);
  } else if (method == "yablo-like") {
    DiGraph g = dependency_graph(sys, {.include_free = true});
    DenotationSystem induced = induced_andnot_system(g);
    for (const VarId& s : sys.denoted())
      if (simplify(sys.formula_of(s)) != simplify(induced.formula_of(s)))
        throw PreconditionError("method yablo-like: d(" + s.str() +
                                ") is not the conjunction of its negated "
                                "successors");
    YabloLikeVerdict verdict = yablo_like_check(g);
    out.method = "yablo-like";
    if (const auto* safe = std::get_if<SafeValuation>(&verdict)) {
      out.status = SolveStatus::Acceptable;
      out.valuation = safe->valuation;
    } else {
      out.status = SolveStatus::Paradoxical;
    }
  } else {
    throw CliError{2, "unknown method '" + method + "'"};
  }
  json payload = outcome_json(sys, out);
  bool paradox = out.status == SolveStatus::Paradoxical;
  emit(ctx, std::move(payload),
       std::string(paradox ? "paradoxical" : "acceptable") + " (method " +
           out.method + ")");
  return paradox && fail_on_paradox ? 3 : 0;
}

int cmd_danger(const std::string& path, const DangerLimits& limits,
               bool fail_on_danger) {
  DocumentContext ctx{"danger"};
  DiGraph g = load_digraph(path, ctx);
  DangerReport report = is_dangerous(g, limits);
  json payload;
  payload["dangerous"] = report.dangerous;
  if (report.witness) {
    json w = json::object();
    for (const VarId& x : g.vertices()) w[x.str()] = bitstring(report.witness->at(x));
    payload["witness"] = std::move(w);
  } else {
    payload["witness"] = nullptr;
  }
  payload["candidates_tried"] = report.candidates_tried;
  payload["limits"] = limits_json(report.limits);
  emit(ctx, std::move(payload),
       report.dangerous
           ? "dangerous (witness after " +
                 std::to_string(report.candidates_tried) + " candidates)"
           : "not dangerous (" + std::to_string(report.candidates_tried) +
                 " candidates swept)");
  return report.dangerous && fail_on_danger ? 3 : 0;
}

int cmd_orientations(const std::string& path, const DangerLimits& limits,
                     bool fail_on_danger) {
  DocumentContext ctx{"orientations"};
  std::string text = read_file(path);
  ctx.digest.feed(text);
  UndiGraph u = parse_ugraph(text);
  OrientationSweepReport report = dangerous_orientation_exists(u, limits);
  json payload;
  payload["exists"] = report.exists;
  if (report.witness) {
    json edges = json::array();
    for (const auto& [a, b] : report.witness->edges())
      edges.push_back(json::array({a.str(), b.str()}));
    payload["witness_edges"] = std::move(edges);
  } else {
    payload["witness_edges"] = nullptr;
  }
  payload["orientations_tried"] = report.orientations_tried;
  payload["limits"] = limits_json(report.limits);
  emit(ctx, std::move(payload),
       report.exists ? "dangerous orientation exists" : "no dangerous orientation");
  return report.exists && fail_on_danger ? 3 : 0;
}

struct GenerateArgs {
  std::string family;
  std::size_t n = 5;
  std::string policy = "clip";
  std::string chain_spec;
  bool open_end = false;
  std::size_t branching = 2;
  std::size_t depth = 2;
  std::uint64_t seed = 0;
  std::size_t max_depth = 4;
  std::string out_path;
};

TruncationPolicy parse_policy(const std::string& name) {
  if (name == "clip") return TruncationPolicy::Clip;
  if (name == "ground-true") return TruncationPolicy::GroundTrue;
  if (name == "ground-false") return TruncationPolicy::GroundFalse;
  throw CliError{2, "unknown policy '" + name + "'"};
}

std::vector<ChainFormTag> parse_chain_spec(const std::string& spec) {
  std::vector<ChainFormTag> tags;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "next") tags.push_back(ChainFormTag::Next);
    else if (item == "not") tags.push_back(ChainFormTag::NotNext);
    else if (item == "const_true") tags.push_back(ChainFormTag::ConstTrue);
    else if (item == "const_false") tags.push_back(ChainFormTag::ConstFalse);
    else throw CliError{2, "unknown chain form '" + item + "'"};
  }
  return tags;
}

int cmd_generate(const GenerateArgs& args) {
  DocumentContext ctx{"generate"};
  DenotationSystem sys;
  json params;
  if (args.family == "yablo") {
    sys = gen_yablo(args.n, parse_policy(args.policy));
    params = {{"n", args.n}, {"policy", args.policy}};
  } else if (args.family == "ygprime") {
    sys = gen_ygprime(args.n, parse_policy(args.policy));
    params = {{"n", args.n}, {"policy", args.policy}};
  } else if (args.family == "ygpp") {
    sys = gen_ygpp(args.n);
    params = {{"n", args.n}};
  } else if (args.family == "only-negative") {
    sys = gen_only_negative(args.n, parse_policy(args.policy));
    params = {{"n", args.n}, {"policy", args.policy}};
  } else if (args.family == "chain") {
    sys = gen_chain(parse_chain_spec(args.chain_spec), args.open_end);
    params = {{"spec", args.chain_spec}, {"open", args.open_end}};
  } else if (args.family == "tree") {
    sys = gen_tree_to_root(args.branching, args.depth);
    params = {{"branching", args.branching}, {"depth", args.depth}};
  } else if (args.family == "random-sc") {
    sys = gen_random_simply_connected(args.n, args.seed, args.max_depth);
    params = {{"n", args.n}, {"seed", args.seed}, {"max_depth", args.max_depth}};
  } else {
    throw CliError{2, "unknown family '" + args.family + "'"};
  }
  std::string text = print_system(sys);
  write_file(args.out_path, text);
  DiGraph g = dependency_graph(sys, {.include_free = true});
  json payload;
  payload["family"] = args.family;
  payload["params"] = std::move(params);
  payload["vertices"] = sys.denoted().size();
  payload["edges"] = g.edge_count();
  payload["closed"] = sys.is_closed();
  payload["out"] = args.out_path;
  emit(ctx, std::move(payload),
       "wrote " + args.out_path + " (" + std::to_string(sys.denoted().size()) +
           " vertices)");
  return 0;
}

int cmd_check_hom(const std::string& gpath, const std::string& hpath,
                  const std::string& map_path) {
  DocumentContext ctx{"check-hom"};
  DiGraph g = load_digraph(gpath, ctx);
  DiGraph h = load_digraph(hpath, ctx);
  std::string map_text = read_file(map_path);
  ctx.digest.feed(map_text);
  std::map<VarId, VarId> f = parse_vertex_map(map_text);
  std::pair<VarId, VarId> bad{VarId("?"), VarId("?")};
  bool ok = is_homomorphism(g, h, f, &bad);
  json payload;
  payload["homomorphism"] = ok;
  payload["violating_edge"] =
      ok ? json(nullptr) : json::array({bad.first.str(), bad.second.str()});
  emit(ctx, std::move(payload),
       ok ? "homomorphism: yes"
          : "homomorphism: no (edge " + bad.first.str() + " -> " +
                bad.second.str() + ")");
  return 0;
}

int cmd_collapse(const std::string& gpath, const std::string& map_path,
                 const std::string& out_path) {
  DocumentContext ctx{"collapse"};
  DiGraph g = load_digraph(gpath, ctx);
  std::string map_text = read_file(map_path);
  ctx.digest.feed(map_text);
  DiGraph collapsed = collapse(g, parse_vertex_map(map_text));
  write_file(out_path, print_digraph(collapsed));
  json payload;
  payload["vertices"] = collapsed.vertex_count();
  payload["edges"] = collapsed.edge_count();
  payload["out"] = out_path;
  emit(ctx, std::move(payload),
       "collapsed to " + std::to_string(collapsed.vertex_count()) +
           " vertices, " + std::to_string(collapsed.edge_count()) + " edges");
  return 0;
}

int cmd_export_dot(const std::string& path, const std::string& out_path,
                   bool negation_marks, bool allow_loops) {
  DocumentContext ctx{"export-dot"};
  std::string text = read_file(path);
  ctx.digest.feed(text);
  DiGraph g;
  std::set<std::pair<VarId, VarId>> marked;
  try {
    DenotationSystem sys = parse_system(text, {.allow_loops = allow_loops});
    g = dependency_graph(sys, {.include_free = true});
    if (negation_marks)
      for (const VarId& s : sys.denoted())
        for (const VarId& t : occurring(sys.formula_of(s)))
          if (negates(sys.formula_of(s), t)) marked.insert({s, t});
  } catch (const ParseError&) {
    g = parse_digraph(text);  // not a system file; negation marks do not apply
  }
  write_file(out_path, to_dot(g, marked));
  json payload;
  payload["nodes"] = g.vertex_count();
  payload["edges"] = g.edge_count();
  payload["negation_marks"] = negation_marks;
  payload["marked_edges"] = marked.size();
  payload["out"] = out_path;
  emit(ctx, std::move(payload), "wrote " + out_path);
  return 0;
}

int cmd_relevance(const std::string& path, bool allow_loops, std::size_t cap) {
  DocumentContext ctx{"relevance"};
  DenotationSystem sys = load_system(path, ctx, allow_loops);
  json rows = json::array();
  for (const VarId& s : sys.denoted()) {
    const Formula& f = sys.formula_of(s);
    json occ = json::array(), rel = json::array();
    for (const VarId& v : occurring_ordered(f)) occ.push_back(v.str());
    std::set<VarId> r = relevant(f, cap);
    for (const VarId& v : occurring_ordered(f))
      if (r.count(v)) rel.push_back(v.str());
    rows.push_back(json{{"vertex", s.str()},
                        {"occurring", std::move(occ)},
                        {"relevant", std::move(rel)}});
  }
  json payload;
  payload["vertices"] = std::move(rows);
  emit(ctx, std::move(payload),
       "relevance report for " + std::to_string(sys.denoted().size()) +
           " vertices");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic dependency system analyzer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string path, second_path, map_path, out_path;
  std::string method = "auto";
  bool allow_loops = false, fail_on_paradox = false, fail_on_danger = false;
  bool free_choice = false, negation_marks = false;
  DangerLimits limits;
  std::size_t cap = 20;
  GenerateArgs gen;

  auto* parse_cmd = app.add_subcommand("parse", "parse and normalize a system file");
  parse_cmd->add_option("path", path)->required();
  parse_cmd->add_flag("--allow-loops", allow_loops);

  auto* solve_cmd = app.add_subcommand("solve", "find an acceptable valuation");
  solve_cmd->add_option("path", path)->required();
  solve_cmd->add_option("--method", method)
      ->check(CLI::IsMember({"auto", "brute", "topo", "simply", "chain",
                             "yablo-like"}));
  solve_cmd->add_flag("--allow-loops", allow_loops);
  solve_cmd->add_flag("--free-choice", free_choice,
                      "default value for unconstrained free variables");
  solve_cmd->add_flag("--fail-on-paradox", fail_on_paradox);

  auto* danger_cmd = app.add_subcommand("danger", "exhaustive dangerousness sweep");
  danger_cmd->add_option("path", path)->required();
  danger_cmd->add_option("--budget-vertices", limits.max_vertices);
  danger_cmd->add_option("--budget-outdegree", limits.max_out_degree);
  danger_cmd->add_flag("--fail-on-danger", fail_on_danger);

  auto* orient_cmd =
      app.add_subcommand("orientations", "sweep all orientations for danger");
  orient_cmd->add_option("path", path)->required();
  orient_cmd->add_option("--budget-vertices", limits.max_vertices);
  orient_cmd->add_option("--budget-outdegree", limits.max_out_degree);
  orient_cmd->add_flag("--fail-on-danger", fail_on_danger);

  auto* gen_cmd = app.add_subcommand("generate", "emit a named structure");
  gen_cmd->add_option("family", gen.family)
      ->required()
      ->check(CLI::IsMember({"yablo", "ygprime", "ygpp", "only-negative",
                             "chain", "tree", "random-sc"}));
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--policy", gen.policy)
      ->check(CLI::IsMember({"clip", "ground-true", "ground-false"}));
  gen_cmd->add_option("--spec", gen.chain_spec,
                      "comma list: next,not,const_true,const_false");
  gen_cmd->add_flag("--open", gen.open_end);
  gen_cmd->add_option("--branching", gen.branching);
  gen_cmd->add_option("--depth", gen.depth);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--max-depth", gen.max_depth);
  gen_cmd->add_option("-o,--out", gen.out_path)->required();

  auto* hom_cmd = app.add_subcommand("check-hom", "verify a graph homomorphism");
  hom_cmd->add_option("graph", path)->required();
  hom_cmd->add_option("target", second_path)->required();
  hom_cmd->add_option("map", map_path)->required();

  auto* collapse_cmd = app.add_subcommand("collapse", "collapse a graph along a map");
  collapse_cmd->add_option("graph", path)->required();
  collapse_cmd->add_option("map", map_path)->required();
  collapse_cmd->add_option("-o,--out", out_path)->required();

  auto* dot_cmd = app.add_subcommand("export-dot", "emit DOT for a system or graph");
  dot_cmd->add_option("path", path)->required();
  dot_cmd->add_option("-o,--out", out_path)->required();
  dot_cmd->add_flag("--negation-marks", negation_marks);
  dot_cmd->add_flag("--allow-loops", allow_loops);

  auto* rel_cmd = app.add_subcommand("relevance", "per-vertex relevance report");
  rel_cmd->add_option("path", path)->required();
  rel_cmd->add_flag("--allow-loops", allow_loops);
  rel_cmd->add_option("--cap", cap);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) return cmd_parse(path, allow_loops);
    if (solve_cmd->parsed())
      return cmd_solve(path, method, allow_loops, free_choice, fail_on_paradox);
    if (danger_cmd->parsed()) return cmd_danger(path, limits, fail_on_danger);
    if (orient_cmd->parsed())
      return cmd_orientations(path, limits, fail_on_danger);
    if (gen_cmd->parsed()) return cmd_generate(gen);
    if (hom_cmd->parsed()) return cmd_check_hom(path, second_path, map_path);
    if (collapse_cmd->parsed()) return cmd_collapse(path, map_path, out_path);
    if (dot_cmd->parsed())
      return cmd_export_dot(path, out_path, negation_marks, allow_loops);
    if (rel_cmd->parsed()) return cmd_relevance(path, allow_loops, cap);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
