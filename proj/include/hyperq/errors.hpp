#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperq {

/// Bad argument to a library call (dimension mismatch, empty list, bad slot).
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The Fock truncation cannot represent the requested state.
class TruncationTooSmall : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The Liouvillian has more than one independent stationary state.
class DegenerateSteadyState : public std::runtime_error {
  public:
    DegenerateSteadyState(std::size_t null_dim, const std::string& what)
        : std::runtime_error(what), null_dim_(null_dim) {}
    std::size_t null_space_dimension() const noexcept { return null_dim_; }

  private:
    std::size_t null_dim_;
};

/// Steady-state solve did not reach the residual contract.
class ConvergenceFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive time stepping kept rejecting steps.
class StiffnessError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Radiance witness denominator vanishes (unpumped system).
class UndefinedWitness : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace hyperq

namespace hyperq {

/// Output location cannot be created or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace hyperq
