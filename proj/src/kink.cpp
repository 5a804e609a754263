#include "monferm/kink.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "monferm/errors.hpp"

namespace monferm {

double kink_profile(double y, double m, double y0) { return 4.0 * std::atan(std::exp(-m * (y - y0))); }

KinkResult sine_gordon_kink(double m, double g, int N, const KinkOptions& o) {
  if (!(m > 0.0) || !(g > 0.0)) throw InvalidArgument("sine_gordon_kink: m and g must be > 0");
  if (N < 2) throw InvalidArgument("sine_gordon_kink: N must be >= 2");
  const double y_max = o.y_max > 0.0 ? o.y_max : 40.0 / m;
  if (y_max * m < 20.0) throw InvalidArgument("sine_gordon_kink: y_max must be >= 20 / m");
  int n = o.points > 0 ? o.points : static_cast<int>(std::ceil(y_max * m / 0.005));
  n += n % 2;
  const double h = y_max / n;
  const double c = h * h * m * m / 12.0;

  KinkResult res;
  res.y.resize(n + 1);
  res.phi.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    res.y[i] = i * h;
    res.phi[i] = std::numbers::pi * (1.0 - std::tanh(0.5 * m * (res.y[i] - 0.5 * y_max)));
  }
  res.phi[0] = 2.0 * std::numbers::pi;
  res.phi[n] = 0.0;

  // The solution is odd about the centre, phi(y_max - y) = 2 pi - phi(y).
  // Solving on the left half with phi(y_max / 2) = pi pins the kink
  // position; on the full interval translations are only pinned at
  // O(exp(-m y_max / 2)) and the Newton system is nearly singular.
  const int half = n / 2;
  res.phi[half] = std::numbers::pi;
  const int u = half - 1;  // unknowns phi_1 .. phi_{half-1}

  // Numerov: phi_{i+1} - 2 phi_i + phi_{i-1} = c (s_{i+1} + 10 s_i + s_{i-1}), s = sin(phi).
  auto residual = [&](const std::vector<double>& p, Eigen::VectorXd& r) {
    r.resize(u);
    for (int i = 1; i < half; ++i)
      r(i - 1) = p[i + 1] - 2.0 * p[i] + p[i - 1] - c * (std::sin(p[i + 1]) + 10.0 * std::sin(p[i]) + std::sin(p[i - 1]));
  };

  Eigen::VectorXd r;
  residual(res.phi, r);
  double rnorm = r.lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool converged = false;
  for (int it = 0; it < o.max_newton; ++it) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * u);
    for (int i = 1; i < half; ++i) {
      const int row = i - 1;
      trip.emplace_back(row, row, -2.0 - 10.0 * c * std::cos(res.phi[i]));
      if (i > 1) trip.emplace_back(row, row - 1, 1.0 - c * std::cos(res.phi[i - 1]));
      if (i < half - 1) trip.emplace_back(row, row + 1, 1.0 - c * std::cos(res.phi[i + 1]));
    }
    Eigen::SparseMatrix<double> jac(u, u);
    jac.setFromTriplets(trip.begin(), trip.end());
    lu.compute(jac);
    if (lu.info() != Eigen::Success) throw NumericalFailure("sine_gordon_kink: singular Jacobian");
    const Eigen::VectorXd delta = lu.solve(-r);

    // Damped update: halve until the residual decreases.
    double lambda = 1.0;
    std::vector<double> trial = res.phi;
    Eigen::VectorXd rt;
    for (int k = 0; k < 30; ++k) {
      for (int i = 1; i < half; ++i) trial[i] = res.phi[i] + lambda * delta(i - 1);
      residual(trial, rt);
      if (rt.lpNorm<Eigen::Infinity>() < rnorm || rt.lpNorm<Eigen::Infinity>() < 1e-14) break;
      lambda *= 0.5;
    }
    res.phi.swap(trial);
    r = rt;
    rnorm = r.lpNorm<Eigen::Infinity>();
    res.newton_iterations = it + 1;
    if (delta.lpNorm<Eigen::Infinity>() < o.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalFailure("sine_gordon_kink: Newton iteration did not converge");
  for (int j = 1; j < half; ++j) res.phi[half + j] = 2.0 * std::numbers::pi - res.phi[half - j];

  // Energy by the trapezoid rule; the integrand decays exponentially at
  // both ends, so the rule is spectrally accurate there.
  const auto& p = res.phi;
  auto dphi = [&](int i) {
    if (i >= 2 && i <= n - 2) return (p[i - 2] - 8.0 * p[i - 1] + 8.0 * p[i + 1] - p[i + 2]) / (12.0 * h);
    if (i < 2) return (-3.0 * p[i] + 4.0 * p[i + 1] - p[i + 2]) / (2.0 * h);
    return (3.0 * p[i] - 4.0 * p[i - 1] + p[i - 2]) / (2.0 * h);
  };
  double energy = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double d = dphi(i);
    const double dens = 0.5 * d * d + m * m * (1.0 - std::cos(p[i]));
    energy += (i == 0 || i == n) ? 0.5 * dens : dens;
  }
  res.energy = energy * h;
  res.action_per_area = g / 12.0 * (N - 1.0 / N) * res.energy;
  res.entropy_density = res.action_per_area / (N - 1);

  double worst = 0.0;
  for (int i = 3; i <= n - 3; ++i) {
    const double d2 = (p[i - 3] / 90.0 - 3.0 * p[i - 2] / 20.0 + 1.5 * p[i - 1] - 49.0 * p[i] / 18.0 + 1.5 * p[i + 1] -
                       3.0 * p[i + 2] / 20.0 + p[i + 3] / 90.0) /
                      (h * h);
    worst = std::max(worst, std::abs(d2 - m * m * std::sin(p[i])));
  }
  res.residual = worst;
  return res;
}

}  // namespace monferm
