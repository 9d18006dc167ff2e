#pragma once

#include <stdexcept>
#include <string>

namespace famrisk {

// Argument outside the mathematical domain of an operation (x outside [0,1],
// non-positive shape, non-finite input, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested quantity exists for no parameter value in the model's domain.
// `best_residual` is the closest approach found, or the attainable bound the
// request violated, depending on the thrower.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

// More than one distinct parameter set reproduces the inputs.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Row and column are 1-based; column 0 means the whole row.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// Well-formed input that violates a record invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace famrisk
