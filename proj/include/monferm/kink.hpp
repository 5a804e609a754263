#pragma once
// Kink of the elliptic sine-Gordon equation phi'' = m^2 sin(phi) with
// phi(0) = 2 pi, phi(y_max) = 0.

#include <vector>

namespace monferm {

struct KinkOptions {
  double y_max = 0.0;     // 0: use 40 / m
  int points = 0;         // grid points; 0: chosen from m and y_max
  double tol = 1e-12;     // Newton step tolerance (max norm)
  int max_newton = 100;
};

struct KinkResult {
  std::vector<double> y;
  std::vector<double> phi;
  double energy = 0.0;           // int [phi'^2 / 2 + m^2 (1 - cos phi)] dy
  double action_per_area = 0.0;  // (g / 12) (N - 1/N) energy
  double entropy_density = 0.0;  // action_per_area / (N - 1)
  double residual = 0.0;         // max |phi'' - m^2 sin phi| (6th-order stencil)
  int newton_iterations = 0;
};

// Numerov discretisation solved by damped Newton with a tridiagonal
// Jacobian. Throws NumericalFailure when Newton does not converge.
KinkResult sine_gordon_kink(double m, double g, int N, const KinkOptions& options = {});

// 4 arctan(exp(-m (y - y0))), the infinite-line kink centred at y0.
double kink_profile(double y, double m, double y0);

}  // namespace monferm
