#pragma once

#include <stdexcept>
#include <string>

namespace bladegauge {

/// Incompatible matrix or field shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (non-Hermitian
/// generator, non-unitary gauge map, |pi_k| > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query outside a coordinate patch (monopole poles, canonical-frame cut locus,
/// degenerate embedding charts).
class ChartError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two routes to the same quantity disagree beyond tolerance.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gradient flow that keeps increasing the action.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bladegauge
