#pragma once

#include <stdexcept>
#include <string>

namespace monferm {

// Bad parameters or configuration. The CLI maps this to exit code 2.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A trajectory violated a state invariant beyond tolerance (exit code 3).
struct TrajectoryAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root finding, quadrature, ODE or BVP failure in the analytics (exit code 4).
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace monferm
