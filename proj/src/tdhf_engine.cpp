#include "monferm/tdhf_engine.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "monferm/errors.hpp"
#include "monferm/simd.hpp"

namespace monferm {

namespace odeint = boost::numeric::odeint;

RMatrix interaction_matrix(const ModelParams& p) {
  const int L = p.L;
  RMatrix V = RMatrix::Zero(L, L);
  if (p.V == 0.0) return V;
  for (int x = 0; x < L; ++x) {
    if (x + 1 < L || p.boundary == Boundary::Periodic) {
      const int y = (x + 1) % L;
      if (y == x) continue;
      V(x, y) = V(y, x) = p.V;
    }
  }
  return V;
}

CMatrix hf_hamiltonian(const HFState& s, const CMatrix& h0, bool flip_fock_sign) {
  const auto L = s.D.rows();
  const double fock = flip_fock_sign ? 1.0 : -1.0;
  CMatrix h = h0;
  for (Eigen::Index i = 0; i < L; ++i) {
    double hartree = 0.0;
    for (Eigen::Index l = 0; l < L; ++l) hartree += s.Vmat(i, l) * s.D(l, l).real();
    h(i, i) += hartree;
    for (Eigen::Index j = 0; j < L; ++j)
      if (s.Vmat(i, j) != 0.0) h(i, j) += fock * s.Vmat(i, j) * s.D(j, i);
  }
  CMatrix herm = 0.5 * (h + h.adjoint());
  return herm;
}

double hf_energy(const HFState& s, const CMatrix& h0) {
  const auto L = s.D.rows();
  double kinetic = 0.0, interaction = 0.0;
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = 0; j < L; ++j) {
      kinetic += (h0(i, j) * s.D(i, j)).real();
      if (s.Vmat(i, j) != 0.0)
        interaction += s.Vmat(i, j) * (s.D(i, i).real() * s.D(j, j).real() - std::norm(s.D(i, j)));
    }
  return kinetic + 0.5 * interaction;
}

TdhfPropagator::TdhfPropagator(const CMatrix& h0, RMatrix Vmat, TdhfOptions options)
    : h0_(h0), V_(std::move(Vmat)), opt_(options), L_(static_cast<int>(h0.rows())) {
  if (V_.rows() != L_ || V_.cols() != L_) throw InvalidArgument("interaction matrix shape mismatch");
  if ((h0_ - h0_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("h0 is not Hermitian");
  if (!(opt_.max_step > 0.0) || !(opt_.abs_tol > 0.0) || !(opt_.rel_tol >= 0.0))
    throw InvalidArgument("bad TDHF integrator options");
  for (int r = 0; r < L_; ++r)
    for (int c = 0; c < L_; ++c)
      if (r == c || h0_(r, c) != cplx{} || V_(r, c) != 0.0) entries_.push_back({r, c, h0_(r, c), V_(r, c)});
}

void TdhfPropagator::rhs(const cplx* d, cplx* out, std::vector<cplx>& a) const {
  const auto L = static_cast<std::size_t>(L_);
  a.assign(L * L, cplx{});
  std::vector<double> hartree(L, 0.0);
  for (const auto& e : entries_)
    if (e.v != 0.0) hartree[e.row] += e.v * d[e.col * L + e.col].real();
  const double fock = opt_.flip_fock_sign ? 1.0 : -1.0;
  // A = h_eff^T D, row i of A collects h_eff(j, i) * row j of D.
  for (const auto& e : entries_) {
    cplx h = e.h0;
    if (e.row == e.col) h += hartree[e.row];
    if (e.v != 0.0) h += fock * e.v * d[e.col * L + e.row];
    if (h == cplx{}) continue;
    simd::caxpy(h, {d + e.row * L, L}, {a.data() + e.col * L, L});
  }
  // dD/dt = i (A - A^dag), Hermitian by construction.
  const cplx I{0.0, 1.0};
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) out[i * L + j] = I * (a[i * L + j] - std::conj(a[j * L + i]));
}

void TdhfPropagator::advance(CorrelationMatrix& D, double dt) const {
  if (dt < 0.0) throw std::logic_error("TDHF advance: negative dt");
  if (dt == 0.0) return;
  const auto L = static_cast<std::size_t>(L_);
  // Complex entries stored as interleaved doubles, row-major.
  std::vector<double> y(2 * L * L);
  auto* yc = reinterpret_cast<cplx*>(y.data());
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) yc[i * L + j] = D(i, j);

  std::vector<cplx> scratch;
  auto system = [&](const std::vector<double>& x, std::vector<double>& dxdt, double) {
    rhs(reinterpret_cast<const cplx*>(x.data()), reinterpret_cast<cplx*>(dxdt.data()), scratch);
  };
  using Stepper = odeint::runge_kutta_dopri5<std::vector<double>>;
  auto stepper = odeint::make_controlled(opt_.abs_tol, opt_.rel_tol, opt_.max_step, Stepper());
  try {
    odeint::integrate_adaptive(stepper, system, y, 0.0, dt, std::min(dt, opt_.max_step));
  } catch (const std::exception& e) {
    throw TrajectoryAbort(std::string("TDHF integrator failed: ") + e.what());
  }
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) D(i, j) = yc[i * L + j];
  D = 0.5 * (D + D.adjoint()).eval();
}

void step_tdhf(HFState& s, const CMatrix& h0, double dt, const TdhfOptions& options) {
  if (!(dt > 0.0)) throw InvalidArgument("step_tdhf: dt must be > 0");
  TdhfPropagator(h0, s.Vmat, options).advance(s.D, dt);
}

MeasurementEvent measure_site_hf(HFState& s, int x, double u) { return measure_site(s.D, x, u); }

TdhfState::TdhfState(std::shared_ptr<const TdhfPropagator> prop, CorrelationMatrix D0, double t0)
    : prop_(std::move(prop)),
      D_(std::move(D0)),
      t_(t0),
      n_(static_cast<int>(std::lround(D_.trace().real()))),
      pure_((D_ * D_ - D_).cwiseAbs().maxCoeff() < 1e-10) {}

void TdhfState::advance_to(double t) {
  if (t < t_) throw std::logic_error("advance_to: time runs backwards");
  if (t == t_) return;
  prop_->advance(D_, t - t_);
  t_ = t;
  if (pure_) {
    for (int it = 0; it < 2; ++it) {
      const CMatrix D2 = D_ * D_;
      D_ = 3.0 * D2 - 2.0 * D2 * D_;
      D_ = 0.5 * (D_ + D_.adjoint()).eval();
    }
  }
}

MeasurementEvent TdhfState::measure(int x, double u, std::optional<Outcome> forced) {
  MeasurementEvent ev;
  ev.t = t_;
  ev.site = x;
  ev.p_click = D_(x, x).real();
  ev.outcome = forced ? *forced : draw_outcome(ev.p_click, u);
  apply_outcome(D_, x, ev.outcome);
  return ev;
}

double TdhfState::energy() const { return hf_energy({D_, prop_->vmat()}, prop_->h0()); }

}  // namespace monferm
