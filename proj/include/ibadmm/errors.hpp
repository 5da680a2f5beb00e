#ifndef IBADMM_ERRORS_HPP
#define IBADMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ibadmm {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Input is not a valid distribution / conditional / config value.
class ValidationError : public Error {
 public:
    using Error::Error;
};

/// Shapes of the arguments do not agree.
class DimensionError : public ValidationError {
 public:
    using ValidationError::ValidationError;
};

/// KL(p||q) with p_i > 0 and q_i = 0.
class InfiniteDivergenceError : public Error {
 public:
    using Error::Error;
};

/// A log-gradient was requested at a zero probability.
class GradientSingularityError : public Error {
 public:
    using Error::Error;
};

/// p(y|x) has a zero entry where strict positivity is required.
class PositivityError : public ValidationError {
 public:
    using ValidationError::ValidationError;
};

/// Every cluster of a Blahut-Arimoto update collapsed for some x.
class DegenerateClusterError : public Error {
 public:
    using Error::Error;
};

/// A Lyapunov evaluation needs snapshots the trace does not hold.
class TraceIncompleteError : public Error {
 public:
    using Error::Error;
};

/// Solver configuration violates its invariants.
class ConfigError : public ValidationError {
 public:
    using ValidationError::ValidationError;
};

}  // namespace ibadmm

#endif  // IBADMM_ERRORS_HPP
