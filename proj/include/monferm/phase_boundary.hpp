#pragma once
// Boundary V_c(gamma) of the localized phase of the interacting d = 1
// chain, from ell_int(gamma, V) = ell_loc(gamma).

#include <optional>
#include <vector>

#include "monferm/model.hpp"
#include "monferm/yhf.hpp"

namespace monferm {

struct PhaseBoundaryOptions {
  // Both length scales are known only up to O(1) factors.
  double ell_loc_prefactor = 1.0;
  double ell_int_prefactor = 1.0;
  double G_stop = 1.0;
  double V_min = 1e-300;
  double V_max = 1e6;
  YhfOptions yhf;
};

struct PhaseBoundaryPoint {
  double gamma = 0.0;
  double ell_loc = 0.0;
  double ln_ell_loc = 0.0;
  double yhf_reduced = 0.0;  // Y_HF J / V^2
  std::optional<double> V_c;  // absent: no crossing in [V_min, V_max]
};

// The template supplies J1, n0 and the lattice; gamma and V are overridden.
std::vector<PhaseBoundaryPoint> phase_boundary(const std::vector<double>& gamma_grid, const ModelParams& templ,
                                               const PhaseBoundaryOptions& options = {});

struct BoundaryFit {
  double slope = 0.0;
  double intercept = 0.0;
  int n_points = 0;
};

// Least-squares line of ln(V_c / sqrt(gamma)) against 1/gamma over the
// points with a crossing and gamma in [gamma_lo, gamma_hi].
BoundaryFit fit_boundary(const std::vector<PhaseBoundaryPoint>& points, double gamma_lo, double gamma_hi);

}  // namespace monferm
