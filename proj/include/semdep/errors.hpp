#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semdep {

/// Syntax error in a formula, system, graph or map source. Positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Evaluation touched a variable the valuation does not define.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive operation was asked to exceed its hard budget.
/// Budgets are errors, not silent truncation: a partial sweep would be unsound.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented operation precondition (named in the message).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semdep
