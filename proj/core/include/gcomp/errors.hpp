#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcomp {

// Bad input or violated precondition. The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the admissible interval of an operation (t, c3s, ...).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Standard-route derivative requested too close to t=0 or t=1.
class EndpointSingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A vector of zero norm was supplied where a direction is needed.
class DegenerateDirectionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Raised inside a per-draw evaluator when an interpolated vector has zero
// norm. The sampling layer catches it and skips the replication.
class DegenerateDrawError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while reducing per-replication values (non-finite value, too many
// skipped replications). The CLI maps these to exit code 3.
class AggregationError : public std::runtime_error {
 public:
  AggregationError(const std::string& what, std::size_t replication)
      : std::runtime_error(what), replication_(replication) {}
  explicit AggregationError(const std::string& what)
      : std::runtime_error(what), replication_(static_cast<std::size_t>(-1)) {}

  std::size_t replication() const noexcept { return replication_; }

 private:
  std::size_t replication_;
};

}  // namespace gcomp
