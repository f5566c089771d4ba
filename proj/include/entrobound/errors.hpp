#pragma once

#include <stdexcept>
#include <string>

namespace entrobound {

/// Input violates a documented type invariant (non-Hermitian matrix, bad trace, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A caller-supplied function is not finite on part of a spectrum.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Operation-specific precondition not met (e.g. a state that is not interior).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace entrobound
