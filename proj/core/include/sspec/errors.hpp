#pragma once

#include <stdexcept>
#include <string>

namespace sspec {

/// Operands live in different algebras or modules (n or m disagree).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies outside the domain of a function or a degenerate input was given.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The real representation of an operator is singular to tolerance.
class NotInvertibleError : public std::runtime_error {
 public:
  NotInvertibleError(const std::string& what, double sigma_min, double sigma_max)
      : std::runtime_error(what), sigma_min_(sigma_min), sigma_max_(sigma_max) {}

  double sigmaMin() const noexcept { return sigma_min_; }
  double sigmaMax() const noexcept { return sigma_max_; }

 private:
  double sigma_min_;
  double sigma_max_;
};

/// A certificate or report required by an operation is missing or negative.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite intermediate value during quadrature.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. The message carries the field path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sspec
