#pragma once
// Dense correlation-matrix state D_ij = <c_i^dag c_j> and the projective
// density measurement shared by all engines.

#include <vector>

#include "monferm/model.hpp"

namespace monferm {

using CorrelationMatrix = CMatrix;

enum class Outcome { NoClick = 0, Click = 1 };

struct MeasurementEvent {
  double t = 0.0;
  int site = 0;
  Outcome outcome = Outcome::NoClick;
  double p_click = 0.0;
};

// Branches with probability below this are treated as impossible.
inline constexpr double kDegenerateBranch = 1e-12;

// Beyond this the trajectory is aborted.
inline constexpr double kAbortDrift = 1e-6;

CorrelationMatrix init_product_state(const std::vector<int>& occupations);

// D' = E D E^dag with E = exp(i h^T dt). Throws InvalidArgument for
// non-Hermitian h or dt < 0.
CorrelationMatrix evolve_unitary(const CorrelationMatrix& D, const CMatrix& h, double dt);

// Outcome for Born probability p and uniform u in [0, 1). Degenerate
// probabilities force the only allowed branch.
Outcome draw_outcome(double p_click, double u);

// Collapses D in place. Throws std::logic_error if the outcome has
// probability below kDegenerateBranch.
void apply_outcome(CorrelationMatrix& D, int x, Outcome outcome);

// Samples and applies a measurement of n_x. The returned event has t = 0.
MeasurementEvent measure_site(CorrelationMatrix& D, int x, double u);

struct StateDiagnostics {
  double hermiticity = 0.0;  // max |D - D^dag|
  double eig_min = 0.0;
  double eig_max = 0.0;
  double trace = 0.0;
};

StateDiagnostics diagnose(const CorrelationMatrix& D);

// Throws TrajectoryAbort when D drifts from a valid Gaussian state with
// n_particles fermions by more than kAbortDrift.
void check_state(const CorrelationMatrix& D, int n_particles, const char* where);

}  // namespace monferm
