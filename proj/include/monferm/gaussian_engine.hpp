#pragma once
// Exact trajectory evolution of the monitored free chain.
//
// Two interchangeable representations of the same Gaussian state:
//   DenseGaussianState  holds D directly (O(L^3) per unitary gap);
//   OrbitalFrame        holds the N occupied orbitals in the eigenmode
//                       basis of h, so unitary gaps are free and each
//                       measurement costs O(L N).

#include <memory>
#include <optional>
#include <vector>

#include "monferm/correlation.hpp"

namespace monferm {

// One-time eigendecomposition h = W diag(eps) W^dag.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const CMatrix& h);

  int size() const { return static_cast<int>(eps_.size()); }
  const Eigen::VectorXd& energies() const { return eps_; }
  const CMatrix& modes() const { return W_; }

  // E = exp(i h^T dt)
  CMatrix step_matrix(double dt) const;

 private:
  Eigen::VectorXd eps_;
  CMatrix W_;
};

class DenseGaussianState {
 public:
  DenseGaussianState(std::shared_ptr<const SpectralPropagator> prop, CorrelationMatrix D0, double t0 = 0.0);

  void advance_to(double t);
  // Measures n_x at the current time; forced overrides the Born draw.
  MeasurementEvent measure(int x, double u, std::optional<Outcome> forced = std::nullopt);
  CorrelationMatrix correlation() const { return D_; }
  double time() const { return t_; }
  int particles() const { return n_; }
  void check(const char* where) const { check_state(D_, n_, where); }

 private:
  std::shared_ptr<const SpectralPropagator> prop_;
  CorrelationMatrix D_;
  double t_;
  int n_;
};

class OrbitalFrame {
 public:
  // Product state with the given occupations at time t0.
  OrbitalFrame(std::shared_ptr<const SpectralPropagator> prop, const std::vector<int>& occupations, double t0 = 0.0);

  void advance_to(double t);
  MeasurementEvent measure(int x, double u, std::optional<Outcome> forced = std::nullopt);
  CorrelationMatrix correlation() const;
  // M (L x N) with D = M M^dag at the current time.
  CMatrix orbitals() const;
  double time() const { return t_; }
  int particles() const { return static_cast<int>(psi_.cols()); }

  // max |Psi^dag Psi - 1|
  double orthonormality_error() const;
  // Thin QR of the orbital block. Aborts if the drift exceeds kAbortDrift.
  void reorthonormalize();
  void check(const char* where) const;

 private:
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::shared_ptr<const SpectralPropagator> prop_;
  RowMajor psi_;  // interaction-picture orbitals: Phi(t) = W diag(e^{-i eps t}) Psi
  double t_;
  long events_since_qr_ = 0;
  std::vector<cplx> w_, v_, u_;  // scratch
};

}  // namespace monferm
