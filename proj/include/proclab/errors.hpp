#pragma once

#include <stdexcept>
#include <string>

namespace proclab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated an operation precondition (bad grid, wrong n, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A covariance matrix could not be factorized.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double min_pivot)
      : std::runtime_error(what + " (min pivot " + std::to_string(min_pivot) + ")"),
        min_pivot_(min_pivot) {}
  double min_pivot() const noexcept { return min_pivot_; }

 private:
  double min_pivot_;
};

// Requested object would exceed a size guard.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace proclab
