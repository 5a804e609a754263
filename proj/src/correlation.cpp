#include "monferm/correlation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "monferm/errors.hpp"

namespace monferm {

CorrelationMatrix init_product_state(const std::vector<int>& occupations) {
  const auto L = static_cast<Eigen::Index>(occupations.size());
  CorrelationMatrix D = CorrelationMatrix::Zero(L, L);
  for (Eigen::Index i = 0; i < L; ++i) D(i, i) = occupations[i] ? 1.0 : 0.0;
  return D;
}

CorrelationMatrix evolve_unitary(const CorrelationMatrix& D, const CMatrix& h, double dt) {
  if (dt < 0.0) throw InvalidArgument("evolve_unitary: dt must be >= 0");
  if (h.rows() != h.cols() || h.rows() != D.rows()) throw InvalidArgument("evolve_unitary: shape mismatch");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("evolve_unitary: h is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CMatrix& W = es.eigenvectors();
  CVector phase(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phase(k) = std::polar(1.0, es.eigenvalues()(k) * dt);
  // h^T = conj(W) diag(eps) W^T
  const CMatrix E = W.conjugate() * phase.asDiagonal() * W.transpose();
  return E * D * E.adjoint();
}

Outcome draw_outcome(double p, double u) {
  if (p < kDegenerateBranch) return Outcome::NoClick;
  if (p > 1.0 - kDegenerateBranch) return Outcome::Click;
  return u < p ? Outcome::Click : Outcome::NoClick;
}

void apply_outcome(CorrelationMatrix& D, int x, Outcome outcome) {
  const double p = D(x, x).real();
  const CVector col = D.col(x);
  if (outcome == Outcome::Click) {
    if (p < kDegenerateBranch) throw std::logic_error("click drawn on a site with zero occupation");
    D.noalias() -= (col * col.adjoint()) / p;
  } else {
    if (p > 1.0 - kDegenerateBranch) throw std::logic_error("no-click drawn on a fully occupied site");
    D.noalias() += (col * col.adjoint()) / (1.0 - p);
  }
  D.row(x).setZero();
  D.col(x).setZero();
  D(x, x) = outcome == Outcome::Click ? 1.0 : 0.0;
}

MeasurementEvent measure_site(CorrelationMatrix& D, int x, double u) {
  MeasurementEvent ev;
  ev.site = x;
  ev.p_click = D(x, x).real();
  ev.outcome = draw_outcome(ev.p_click, u);
  apply_outcome(D, x, ev.outcome);
  return ev;
}

StateDiagnostics diagnose(const CorrelationMatrix& D) {
  StateDiagnostics d;
  d.hermiticity = D.rows() ? (D - D.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  d.trace = D.trace().real();
  if (D.rows()) {
    const CMatrix H = 0.5 * (D + D.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    d.eig_min = es.eigenvalues().minCoeff();
    d.eig_max = es.eigenvalues().maxCoeff();
  }
  return d;
}

void check_state(const CorrelationMatrix& D, int n_particles, const char* where) {
  const StateDiagnostics d = diagnose(D);
  const bool ok = d.hermiticity <= kAbortDrift && d.eig_min >= -kAbortDrift && d.eig_max <= 1.0 + kAbortDrift &&
                  std::abs(d.trace - n_particles) <= kAbortDrift;
  if (!ok) {
    std::ostringstream msg;
    msg.precision(12);
    msg << where << ": state drift (hermiticity " << d.hermiticity << ", spectrum [" << d.eig_min << ", "
        << d.eig_max << "], trace " << d.trace << " vs " << n_particles << ")";
    throw TrajectoryAbort(msg.str());
  }
}

}  // namespace monferm
