#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semdep/errors.hpp"
#include "semdep/varid.hpp"

namespace semdep {

enum class FormulaKind { True, False, Var, Not, And, Or };

/// Propositional formula tree: constants, variables, unary negation and
/// n-ary conjunction/disjunction. Trees are immutable values; child order is
/// preserved. The empty conjunction evaluates to true, the empty disjunction
/// to false (vacuous-truth convention).
class Formula {
 public:
  static Formula tru() { return Formula(FormulaKind::True); }
  static Formula fls() { return Formula(FormulaKind::False); }
  static Formula constant(bool b) { return b ? tru() : fls(); }

  static Formula var(VarId v) {
    Formula f(FormulaKind::Var);
    f.var_ = std::move(v);
    return f;
  }
  static Formula var(const std::string& name) { return var(VarId(name)); }

  static Formula negate(Formula child) {
    Formula f(FormulaKind::Not);
    f.kids_.push_back(std::move(child));
    return f;
  }

  static Formula conj(std::vector<Formula> kids) {
    Formula f(FormulaKind::And);
    f.kids_ = std::move(kids);
    return f;
  }

  static Formula disj(std::vector<Formula> kids) {
    Formula f(FormulaKind::Or);
    f.kids_ = std::move(kids);
    return f;
  }

  FormulaKind kind() const { return kind_; }
  bool is_constant() const {
    return kind_ == FormulaKind::True || kind_ == FormulaKind::False;
  }

  const VarId& var() const { return *var_; }
  const std::vector<Formula>& children() const { return kids_; }
  const Formula& child() const { return kids_.front(); }

  bool operator==(const Formula&) const = default;

 private:
  explicit Formula(FormulaKind kind) : kind_(kind) {}

  FormulaKind kind_;
  std::optional<VarId> var_;
  std::vector<Formula> kids_;
};

/// n-ary conjunction with the junction conventions used across the library:
/// an empty list stays the empty conjunction And[] (≡ ⊤), a single conjunct
/// collapses to itself, two or more form an And node.
inline Formula make_conj(std::vector<Formula> kids) {
  if (kids.size() == 1) return std::move(kids.front());
  return Formula::conj(std::move(kids));
}

inline Formula make_disj(std::vector<Formula> kids) {
  if (kids.size() == 1) return std::move(kids.front());
  return Formula::disj(std::move(kids));
}

/// Boolean assignment to variables. Totality is contextual: eval() requires
/// every queried variable to be present (a miss throws, it never defaults),
/// eval_partial() treats misses as Unknown.
class Valuation {
 public:
  Valuation() = default;
  Valuation(std::initializer_list<std::pair<const VarId, bool>> init)
      : entries_(init) {}

  void set(const VarId& v, bool value) { entries_[v] = value; }
  bool contains(const VarId& v) const { return entries_.count(v) != 0; }

  bool at(const VarId& v) const {
    auto it = entries_.find(v);
    if (it == entries_.end())
      throw EvalError("valuation does not define variable " + v.str());
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<VarId, bool>& entries() const { return entries_; }

  bool operator==(const Valuation&) const = default;

 private:
  std::map<VarId, bool> entries_;
};

enum class ThreeValued { False, True, Unknown };

inline bool eval(const Formula& f, const Valuation& v) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Var:
      return v.at(f.var());
    case FormulaKind::Not:
      return !eval(f.child(), v);
    case FormulaKind::And:
      for (const Formula& k : f.children())
        if (!eval(k, v)) return false;
      return true;
    case FormulaKind::Or:
      for (const Formula& k : f.children())
        if (eval(k, v)) return true;
      return false;
  }
  throw std::logic_error("eval: bad formula kind");
}

/// Kleene strong three-valued evaluation under a partial assignment. Returns
/// True/False when the mapped variables force the value at the evaluation-rule
/// level; this is weaker than semantic forcing (e.g. x | !x with x unmapped
/// stays Unknown).
inline ThreeValued eval_partial(const Formula& f, const Valuation& pv) {
  switch (f.kind()) {
    case FormulaKind::True:
      return ThreeValued::True;
    case FormulaKind::False:
      return ThreeValued::False;
    case FormulaKind::Var:
      if (!pv.contains(f.var())) return ThreeValued::Unknown;
      return pv.at(f.var()) ? ThreeValued::True : ThreeValued::False;
    case FormulaKind::Not: {
      ThreeValued t = eval_partial(f.child(), pv);
      if (t == ThreeValued::True) return ThreeValued::False;
      if (t == ThreeValued::False) return ThreeValued::True;
      return ThreeValued::Unknown;
    }
    case FormulaKind::And: {
      bool unknown = false;
      for (const Formula& k : f.children()) {
        ThreeValued t = eval_partial(k, pv);
        if (t == ThreeValued::False) return ThreeValued::False;
        if (t == ThreeValued::Unknown) unknown = true;
      }
      return unknown ? ThreeValued::Unknown : ThreeValued::True;
    }
    case FormulaKind::Or: {
      bool unknown = false;
      for (const Formula& k : f.children()) {
        ThreeValued t = eval_partial(k, pv);
        if (t == ThreeValued::True) return ThreeValued::True;
        if (t == ThreeValued::Unknown) unknown = true;
      }
      return unknown ? ThreeValued::Unknown : ThreeValued::False;
    }
  }
  throw std::logic_error("eval_partial: bad formula kind");
}

namespace detail {
inline void collect_vars(const Formula& f, std::vector<VarId>& order,
                         std::set<VarId>& seen) {
  switch (f.kind()) {
    case FormulaKind::Var:
      if (seen.insert(f.var()).second) order.push_back(f.var());
      return;
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or:
      for (const Formula& k : f.children()) collect_vars(k, order, seen);
      return;
    default:
      return;
  }
}
}  // namespace detail

inline std::set<VarId> occurring(const Formula& f) {
  std::vector<VarId> order;
  std::set<VarId> seen;
  detail::collect_vars(f, order, seen);
  return seen;
}

/// Occurring variables in order of first appearance (left-to-right traversal).
inline std::vector<VarId> occurring_ordered(const Formula& f) {
  std::vector<VarId> order;
  std::set<VarId> seen;
  detail::collect_vars(f, order, seen);
  return order;
}

inline Formula substitute(const Formula& f, const VarId& x, bool c) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Var:
      return f.var() == x ? Formula::constant(c) : f;
    case FormulaKind::Not:
      return Formula::negate(substitute(f.child(), x, c));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const Formula& k : f.children()) kids.push_back(substitute(k, x, c));
      return f.kind() == FormulaKind::And ? Formula::conj(std::move(kids))
                                          : Formula::disj(std::move(kids));
    }
  }
  throw std::logic_error("substitute: bad formula kind");
}

/// Constant folding only: negated constants fold, neutral elements drop,
/// dominant elements short-circuit, empty junctions collapse to their
/// constant, singleton junctions collapse to the child. No relevance-based
/// rewriting happens here. The result is logically equivalent to the input
/// and contains no constant leaf unless it is itself a single constant.
inline Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Var:
      return f;
    case FormulaKind::Not: {
      Formula k = simplify(f.child());
      if (k.kind() == FormulaKind::True) return Formula::fls();
      if (k.kind() == FormulaKind::False) return Formula::tru();
      return Formula::negate(std::move(k));
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      const FormulaKind dominant = is_and ? FormulaKind::False : FormulaKind::True;
      const FormulaKind neutral = is_and ? FormulaKind::True : FormulaKind::False;
      std::vector<Formula> kids;
      for (const Formula& raw : f.children()) {
        Formula k = simplify(raw);
        if (k.kind() == dominant) return Formula::constant(!is_and);
        if (k.kind() == neutral) continue;
        kids.push_back(std::move(k));
      }
      if (kids.empty()) return Formula::constant(is_and);
      if (kids.size() == 1) return std::move(kids.front());
      return is_and ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
  }
  throw std::logic_error("simplify: bad formula kind");
}

namespace detail {
inline std::vector<VarId> occurring_capped(const Formula& f, std::size_t cap,
                                           const char* op) {
  std::vector<VarId> vars = occurring_ordered(f);
  if (vars.size() > cap)
    throw BudgetExceeded(std::string(op) + ": formula has " +
                         std::to_string(vars.size()) +
                         " variables, cap is " + std::to_string(cap));
  return vars;
}
}  // namespace detail

/// The variables that can change the formula's value under some co-assignment
/// of the other occurring variables. Decided by exhaustive enumeration, hence
/// the hard cap; callers that see the budget error must treat every occurring
/// variable as relevant.
inline std::set<VarId> relevant(const Formula& f, std::size_t cap = 20) {
  std::vector<VarId> vars = detail::occurring_capped(f, cap, "relevant");
  std::set<VarId> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::uint64_t combos = std::uint64_t(1) << (vars.size() - 1);
    for (std::uint64_t m = 0; m < combos; ++m) {
      Valuation v;
      std::uint64_t bits = m;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        if (j == i) continue;
        v.set(vars[j], bits & 1);
        bits >>= 1;
      }
      v.set(vars[i], false);
      bool lo = eval(f, v);
      v.set(vars[i], true);
      bool hi = eval(f, v);
      if (lo != hi) {
        out.insert(vars[i]);
        break;
      }
    }
  }
  return out;
}

/// Some(b) iff the formula evaluates to b under every assignment of its
/// occurring variables (exhaustive check, capped).
inline std::optional<bool> is_semantic_constant(const Formula& f,
                                                std::size_t cap = 20) {
  std::vector<VarId> vars = detail::occurring_capped(f, cap, "is_semantic_constant");
  std::optional<bool> value;
  const std::uint64_t combos = std::uint64_t(1) << vars.size();
  for (std::uint64_t m = 0; m < combos; ++m) {
    Valuation v;
    for (std::size_t j = 0; j < vars.size(); ++j) v.set(vars[j], (m >> j) & 1);
    bool b = eval(f, v);
    if (!value) value = b;
    else if (*value != b) return std::nullopt;
  }
  return value;
}

/// Realizes an arbitrary Boolean function as a formula by full Shannon
/// expansion. Row r of the table is the function value when the i-th listed
/// variable carries bit (|vars|-1-i) of r, so row 0 is the all-false row.
/// Every listed variable occurs syntactically in the result, even when it is
/// semantically irrelevant — that is the point: the result's dependency edges
/// are exactly `vars`.
inline Formula from_truth_table(const std::vector<VarId>& vars,
                                const std::vector<bool>& table) {
  if (vars.size() > 20)
    throw BudgetExceeded("from_truth_table: more than 20 variables");
  const std::size_t rows = std::size_t(1) << vars.size();
  if (table.size() != rows)
    throw PreconditionError("from_truth_table: table length " +
                            std::to_string(table.size()) + ", expected " +
                            std::to_string(rows));
  if (vars.empty()) return Formula::constant(table[0]);
  std::vector<Formula> minterms;
  minterms.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Formula> lits;
    lits.reserve(vars.size() + 1);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      bool bit = (r >> (vars.size() - 1 - i)) & 1;
      Formula leaf = Formula::var(vars[i]);
      lits.push_back(bit ? std::move(leaf) : Formula::negate(std::move(leaf)));
    }
    lits.push_back(Formula::constant(table[r]));
    minterms.push_back(Formula::conj(std::move(lits)));
  }
  return Formula::disj(std::move(minterms));
}

// ---------------------------------------------------------------------------
// Text format: parser and printer.
//
//   formula := or ; or := and ("|" and)* ; and := unary ("&" unary)* ;
//   unary := "!" unary | atom ;
//   atom := "TRUE" | "FALSE" | ident | quoted | "(" formula ")" ;
//
// Whitespace is insignificant, "#" starts a line comment, adjacent "&"/"|"
// chains flatten into one n-ary node.
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  enum Kind { LParen, RParen, Bang, Amp, Pipe, Equals, Arrow, DoubleDash,
              Ident, Quoted, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::size_t base_line)
      : src_(src), line_(base_line) {}

  Token next() {
    skip_ws();
    std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) return {Token::End, "", line, col};
    char c = src_[pos_];
    switch (c) {
      case '(': ++pos_; ++col_; return {Token::LParen, "(", line, col};
      case ')': ++pos_; ++col_; return {Token::RParen, ")", line, col};
      case '!': ++pos_; ++col_; return {Token::Bang, "!", line, col};
      case '&': ++pos_; ++col_; return {Token::Amp, "&", line, col};
      case '|': ++pos_; ++col_; return {Token::Pipe, "|", line, col};
      case '=': ++pos_; ++col_; return {Token::Equals, "=", line, col};
      case '"': return lex_quoted(line, col);
      default: break;
    }
    if (c == '-') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        pos_ += 2; col_ += 2;
        return {Token::Arrow, "->", line, col};
      }
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        pos_ += 2; col_ += 2;
        return {Token::DoubleDash, "--", line, col};
      }
    }
    if (is_plain_ident(std::string_view(&c, 1))) return lex_ident(line, col);
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
  }

  Token lex_ident(std::size_t line, std::size_t col) {
    std::size_t start = pos_;
    auto tail = [](char c) {
      return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
             (c >= '0' && c <= '9') || c == '_';
    };
    while (pos_ < src_.size() && tail(src_[pos_])) {
      ++pos_;
      ++col_;
    }
    return {Token::Ident, std::string(src_.substr(start, pos_ - start)), line, col};
  }

  Token lex_quoted(std::size_t line, std::size_t col) {
    ++pos_;  // opening quote
    ++col_;
    std::string value;
    while (true) {
      if (pos_ >= src_.size())
        throw ParseError("unterminated quoted identifier", line, col);
      char c = src_[pos_];
      if (c == '\n') throw ParseError("unterminated quoted identifier", line, col);
      ++pos_;
      ++col_;
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= src_.size())
          throw ParseError("dangling escape in quoted identifier", line, col);
        value.push_back(src_[pos_]);
        ++pos_;
        ++col_;
      } else {
        value.push_back(c);
      }
    }
    if (value.empty()) throw ParseError("empty quoted identifier", line, col);
    return {Token::Quoted, value, line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_ = 1;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view src, std::size_t base_line)
      : lexer_(src, base_line) {
    advance();
  }

  Formula parse_whole() {
    if (tok_.kind == Token::End)
      throw ParseError("empty formula", tok_.line, tok_.column);
    Formula f = parse_or();
    expect_end();
    return f;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect_end() {
    if (tok_.kind != Token::End)
      throw ParseError("unexpected trailing input '" + tok_.text + "'",
                       tok_.line, tok_.column);
  }

  Formula parse_or() {
    std::vector<Formula> parts;
    parts.push_back(parse_and());
    while (tok_.kind == Token::Pipe) {
      advance();
      parts.push_back(parse_and());
    }
    return make_disj(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts;
    parts.push_back(parse_unary());
    while (tok_.kind == Token::Amp) {
      advance();
      parts.push_back(parse_unary());
    }
    return make_conj(std::move(parts));
  }

  Formula parse_unary() {
    if (tok_.kind == Token::Bang) {
      advance();
      return Formula::negate(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    switch (tok_.kind) {
      case Token::Ident: {
        std::string name = tok_.text;
        advance();
        if (name == "TRUE") return Formula::tru();
        if (name == "FALSE") return Formula::fls();
        return Formula::var(VarId(std::move(name)));
      }
      case Token::Quoted: {
        Formula f = Formula::var(VarId(tok_.text));
        advance();
        return f;
      }
      case Token::LParen: {
        Token open = tok_;
        advance();
        Formula f = parse_or();
        if (tok_.kind != Token::RParen)
          throw ParseError("unbalanced parenthesis opened here", open.line,
                           open.column);
        advance();
        return f;
      }
      case Token::RParen:
        throw ParseError("unmatched ')'", tok_.line, tok_.column);
      case Token::End:
        throw ParseError("formula ends unexpectedly", tok_.line, tok_.column);
      default:
        throw ParseError("unexpected token '" + tok_.text + "'", tok_.line,
                         tok_.column);
    }
  }

  Lexer lexer_;
  Token tok_{Token::End, "", 0, 0};
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, std::size_t base_line = 1) {
  return detail::FormulaParser(text, base_line).parse_whole();
}

namespace detail {

// Parenthesization for the minimal-paren printer: a junction child is wrapped
// iff printing it bare would re-associate on re-parse. Negation chains never
// need parens.
inline bool needs_parens(FormulaKind child, FormulaKind parent) {
  if (child != FormulaKind::And && child != FormulaKind::Or) return false;
  switch (parent) {
    case FormulaKind::Or:
      return child == FormulaKind::Or;
    case FormulaKind::And:
    case FormulaKind::Not:
      return true;
    default:  // top level / inside fresh parens
      return false;
  }
}

inline void print_rec(const Formula& f, FormulaKind parent, std::string& out) {
  if (needs_parens(f.kind(), parent)) {
    out.push_back('(');
    print_rec(f, FormulaKind::Var, out);  // reset context inside parens
    out.push_back(')');
    return;
  }
  switch (f.kind()) {
    case FormulaKind::True:
      out += "TRUE";
      return;
    case FormulaKind::False:
      out += "FALSE";
      return;
    case FormulaKind::Var:
      out += format_ident(f.var());
      return;
    case FormulaKind::Not:
      out.push_back('!');
      print_rec(f.child(), FormulaKind::Not, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      if (f.children().empty()) {
        out += f.kind() == FormulaKind::And ? "TRUE" : "FALSE";
        return;
      }
      const char* sep = f.kind() == FormulaKind::And ? " & " : " | ";
      bool first = true;
      for (const Formula& k : f.children()) {
        if (!first) out += sep;
        first = false;
        print_rec(k, f.kind(), out);
      }
      return;
    }
  }
}

}  // namespace detail

/// Minimal-parenthesis rendering under the grammar's precedence. Empty
/// junctions print as their constant and singleton junctions as their child,
/// so those shapes do not round-trip structurally (their prints do).
inline std::string print_formula(const Formula& f) {
  std::string out;
  detail::print_rec(f, FormulaKind::Var, out);
  return out;
}

}  // namespace semdep
