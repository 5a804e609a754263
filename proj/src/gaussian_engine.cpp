#include "monferm/gaussian_engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "monferm/errors.hpp"
#include "monferm/simd.hpp"

namespace monferm {

SpectralPropagator::SpectralPropagator(const CMatrix& h) {
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  eps_ = es.eigenvalues();
  W_ = es.eigenvectors();
}

CMatrix SpectralPropagator::step_matrix(double dt) const {
  CVector phase(eps_.size());
  for (Eigen::Index k = 0; k < eps_.size(); ++k) phase(k) = std::polar(1.0, eps_(k) * dt);
  return W_.conjugate() * phase.asDiagonal() * W_.transpose();
}

DenseGaussianState::DenseGaussianState(std::shared_ptr<const SpectralPropagator> prop, CorrelationMatrix D0, double t0)
    : prop_(std::move(prop)), D_(std::move(D0)), t_(t0), n_(static_cast<int>(std::lround(D_.trace().real()))) {
  if (D_.rows() != prop_->size()) throw InvalidArgument("state and hamiltonian sizes differ");
}

void DenseGaussianState::advance_to(double t) {
  if (t < t_) throw std::logic_error("advance_to: time runs backwards");
  if (t == t_) return;
  const CMatrix E = prop_->step_matrix(t - t_);
  D_ = E * D_ * E.adjoint();
  t_ = t;
}

MeasurementEvent DenseGaussianState::measure(int x, double u, std::optional<Outcome> forced) {
  MeasurementEvent ev;
  ev.t = t_;
  ev.site = x;
  ev.p_click = D_(x, x).real();
  ev.outcome = forced ? *forced : draw_outcome(ev.p_click, u);
  apply_outcome(D_, x, ev.outcome);
  return ev;
}

OrbitalFrame::OrbitalFrame(std::shared_ptr<const SpectralPropagator> prop, const std::vector<int>& occ, double t0)
    : prop_(std::move(prop)), t_(t0) {
  const int L = prop_->size();
  if (static_cast<int>(occ.size()) != L) throw InvalidArgument("occupation vector length differs from L");
  std::vector<int> sites;
  for (int x = 0; x < L; ++x)
    if (occ[x]) sites.push_back(x);
  const auto& W = prop_->modes();
  const auto& eps = prop_->energies();
  psi_.resize(L, static_cast<Eigen::Index>(sites.size()));
  for (int k = 0; k < L; ++k) {
    const cplx ph = std::polar(1.0, eps(k) * t0);
    for (std::size_t n = 0; n < sites.size(); ++n) psi_(k, n) = ph * std::conj(W(sites[n], k));
  }
  w_.resize(L);
  v_.resize(sites.size());
  u_.resize(sites.size());
}

void OrbitalFrame::advance_to(double t) {
  if (t < t_) throw std::logic_error("advance_to: time runs backwards");
  t_ = t;
}

MeasurementEvent OrbitalFrame::measure(int x, double u, std::optional<Outcome> forced) {
  const int L = prop_->size();
  const auto N = static_cast<std::size_t>(psi_.cols());
  const auto& W = prop_->modes();
  const auto& eps = prop_->energies();

  // Row x of the site-basis orbitals: v = sum_k w_k Psi[k, :].
  for (int k = 0; k < L; ++k) w_[k] = W(x, k) * std::polar(1.0, -eps(k) * t_);
  std::fill(v_.begin(), v_.end(), cplx{});
  for (int k = 0; k < L; ++k) simd::caxpy(w_[k], {psi_.row(k).data(), N}, v_);

  MeasurementEvent ev;
  ev.t = t_;
  ev.site = x;
  ev.p_click = N ? simd::cnorm2(v_) : 0.0;
  ev.outcome = forced ? *forced : draw_outcome(ev.p_click, u);
  const double p = ev.p_click;
  if (ev.outcome == Outcome::Click && p < kDegenerateBranch)
    throw std::logic_error("click drawn on a site with zero occupation");
  if (ev.outcome == Outcome::NoClick && p > 1.0 - kDegenerateBranch)
    throw std::logic_error("no-click drawn on a fully occupied site");
  if (N == 0) return ev;

  // Householder reflection H = 1 - tau u u^dag with H conj(v) = alpha e_0,
  // applied from the right so only orbital 0 touches site x afterwards.
  const double norm = std::sqrt(p);
  cplx alpha = 0.0;
  if (norm > 0.0) {
    for (std::size_t n = 0; n < N; ++n) u_[n] = std::conj(v_[n]);
    const double a0 = std::abs(u_[0]);
    const cplx phase = a0 > 0.0 ? u_[0] / a0 : cplx{1.0, 0.0};
    alpha = -phase * norm;
    u_[0] -= alpha;
    const double unorm2 = 2.0 * norm * (norm + a0);
    if (unorm2 > 0.0) {
      const double tau = 2.0 / unorm2;
      for (int k = 0; k < L; ++k) {
        std::span<cplx> row(psi_.row(k).data(), N);
        const cplx s = simd::cdotu(row, u_);
        simd::caxpy_conj(-tau * s, u_, row);
      }
    }
  }

  if (ev.outcome == Outcome::Click) {
    for (int k = 0; k < L; ++k) psi_(k, 0) = std::conj(w_[k]);
  } else {
    const double inv = 1.0 / std::sqrt(1.0 - p);
    const cplx ab = std::conj(alpha);
    for (int k = 0; k < L; ++k) psi_(k, 0) = (psi_(k, 0) - ab * std::conj(w_[k])) * inv;
  }

  if (++events_since_qr_ >= L) reorthonormalize();
  return ev;
}

CMatrix OrbitalFrame::orbitals() const {
  const int L = prop_->size();
  const auto& eps = prop_->energies();
  CMatrix scaled(L, psi_.cols());
  for (int k = 0; k < L; ++k) scaled.row(k) = std::polar(1.0, -eps(k) * t_) * psi_.row(k);
  const CMatrix phi = prop_->modes() * scaled;
  return phi.conjugate();
}

CorrelationMatrix OrbitalFrame::correlation() const {
  const CMatrix M = orbitals();
  CorrelationMatrix D = M * M.adjoint();
  // Exact Hermiticity and real diagonal.
  D = 0.5 * (D + D.adjoint()).eval();
  return D;
}

double OrbitalFrame::orthonormality_error() const {
  if (psi_.cols() == 0) return 0.0;
  const CMatrix g = psi_.adjoint() * psi_;
  return (g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

void OrbitalFrame::reorthonormalize() {
  events_since_qr_ = 0;
  if (psi_.cols() == 0) return;
  const double err = orthonormality_error();
  if (err > kAbortDrift) {
    std::ostringstream msg;
    msg << "orbital frame lost orthonormality (" << err << ")";
    throw TrajectoryAbort(msg.str());
  }
  const CMatrix a = psi_;
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(psi_.rows(), psi_.cols());
  psi_ = Q;
}

void OrbitalFrame::check(const char* where) const {
  const double err = orthonormality_error();
  if (err > kAbortDrift) {
    std::ostringstream msg;
    msg << where << ": orbital frame lost orthonormality (" << err << ")";
    throw TrajectoryAbort(msg.str());
  }
}

}  // namespace monferm
