#include "monferm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "monferm/ensemble.hpp"
#include "monferm/errors.hpp"
#include "monferm/gaussian_engine.hpp"

namespace monferm {

namespace {

int popcount_below(std::uint32_t s, int x) { return std::popcount(s & ((1u << x) - 1u)); }

double xlogx_sum(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (double v : p)
    if (v > 1e-300) s -= v * std::log(v);
  return s;
}

}  // namespace

FockSector::FockSector(int L, int N) : L_(L), N_(N) {
  if (L < 1 || L > kOracleMaxSites) throw InvalidArgument("oracle: L must lie in [1, 12]");
  if (N < 0 || N > L) throw InvalidArgument("oracle: bad particle number");
  index_.assign(std::size_t{1} << L, -1);
  for (std::uint32_t m = 0; m < (1u << L); ++m)
    if (std::popcount(m) == N) {
      index_[m] = static_cast<int>(states_.size());
      states_.push_back(m);
    }
}

bool apply_hop(std::uint32_t s, int i, int j, std::uint32_t& out, int& sign) {
  if (!(s >> j & 1u)) return false;
  std::uint32_t t = s & ~(1u << j);
  int parity = popcount_below(t, j);
  if (t >> i & 1u) return false;
  parity += popcount_below(t, i);
  out = t | (1u << i);
  sign = parity % 2 ? -1 : 1;
  return true;
}

ExactOracle::ExactOracle(const ModelParams& params)
    : params_(params), sector_((params.validate(), params.L), params.particle_number()) {
  const CMatrix h = build_hamiltonian(params);
  const RMatrix Vmat = interaction_matrix(params);
  const int L = params.L, dim = sector_.dim();
  H_ = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const std::uint32_t s = sector_.state(k);
    double diag = 0.0;
    for (int x = 0; x < L; ++x) {
      if (!(s >> x & 1u)) continue;
      diag += h(x, x).real();
      for (int y = x + 1; y < L; ++y)
        if (s >> y & 1u) diag += Vmat(x, y);
    }
    H_(k, k) += diag;
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) {
        if (i == j || h(i, j) == cplx(0.0)) continue;
        std::uint32_t t;
        int sign;
        if (apply_hop(s, i, j, t, sign)) H_(sector_.index(t), k) += static_cast<double>(sign) * h(i, j);
      }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H_);
  E_ = es.eigenvalues();
  U_ = es.eigenvectors();
}

StateVector ExactOracle::product_state(const std::vector<int>& occupations) const {
  if (static_cast<int>(occupations.size()) != sector_.sites()) throw InvalidArgument("oracle: occupation length != L");
  std::uint32_t m = 0;
  for (int x = 0; x < sector_.sites(); ++x)
    if (occupations[x]) m |= 1u << x;
  const int k = sector_.index(m);
  if (k < 0) throw InvalidArgument("oracle: occupations outside the particle-number sector");
  StateVector psi = StateVector::Zero(sector_.dim());
  psi(k) = 1.0;
  return psi;
}

StateVector ExactOracle::slater_state(const CMatrix& Phi) const {
  const int L = sector_.sites(), N = sector_.particles();
  if (Phi.rows() != L || Phi.cols() != N) throw InvalidArgument("oracle: Slater orbitals must be L x N");
  StateVector psi(sector_.dim());
  CMatrix sub(N, N);
  for (int k = 0; k < sector_.dim(); ++k) {
    const std::uint32_t s = sector_.state(k);
    int r = 0;
    for (int x = 0; x < L; ++x)
      if (s >> x & 1u) sub.row(r++) = Phi.row(x);
    psi(k) = N == 0 ? cplx(1.0) : sub.determinant();
  }
  return psi;
}

StateVector ExactOracle::evolve(const StateVector& psi, double dt) const {
  if (dt < 0.0) throw InvalidArgument("oracle: dt must be >= 0");
  CVector c = U_.adjoint() * psi;
  for (int k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -E_(k) * dt);
  return U_ * c;
}

double ExactOracle::click_probability(const StateVector& psi, int x) const {
  double p = 0.0;
  for (int k = 0; k < sector_.dim(); ++k)
    if (sector_.state(k) >> x & 1u) p += std::norm(psi(k));
  return p;
}

MeasurementEvent ExactOracle::measure(StateVector& psi, int x, double u, std::optional<Outcome> forced) const {
  if (x < 0 || x >= sector_.sites()) throw InvalidArgument("oracle: site out of range");
  MeasurementEvent ev;
  ev.site = x;
  ev.p_click = click_probability(psi, x);
  ev.outcome = forced ? *forced : draw_outcome(ev.p_click, u);
  const bool click = ev.outcome == Outcome::Click;
  const double p = click ? ev.p_click : 1.0 - ev.p_click;
  if (p < kDegenerateBranch) throw std::logic_error("oracle: measured a branch of zero probability");
  for (int k = 0; k < sector_.dim(); ++k)
    if (static_cast<bool>(sector_.state(k) >> x & 1u) != click) psi(k) = 0.0;
  psi /= std::sqrt(psi.squaredNorm());
  return ev;
}

double ExactOracle::energy(const StateVector& psi) const { return psi.dot(H_ * psi).real(); }

CorrelationMatrix ExactOracle::correlation(const StateVector& psi) const {
  const int L = sector_.sites();
  CorrelationMatrix D = CorrelationMatrix::Zero(L, L);
  for (int k = 0; k < sector_.dim(); ++k) {
    const std::uint32_t s = sector_.state(k);
    if (psi(k) == cplx(0.0)) continue;
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) {
        if (i == j) {
          if (s >> i & 1u) D(i, i) += std::norm(psi(k));
          continue;
        }
        std::uint32_t t;
        int sign;
        if (apply_hop(s, i, j, t, sign)) D(i, j) += static_cast<double>(sign) * std::conj(psi(sector_.index(t))) * psi(k);
      }
  }
  return D;
}

double region_entropy(const FockSector& sector, const StateVector& psi, const Region& A, int renyi) {
  const int L = sector.sites();
  A.validate(L);
  std::uint32_t maskA = 0;
  for (int x : A.sites) maskA |= 1u << x;
  const int nA = A.size(), nB = L - nA;
  // Amplitudes reshaped as Psi[a][b] after moving the modes of A to the front.
  CMatrix Psi = CMatrix::Zero(std::size_t{1} << nA, std::size_t{1} << nB);
  for (int k = 0; k < sector.dim(); ++k) {
    const std::uint32_t s = sector.state(k);
    std::uint32_t a = 0, b = 0;
    int ia = 0, ib = 0, parity = 0, b_seen = 0;
    for (int x = 0; x < L; ++x) {
      const bool occ = s >> x & 1u;
      if (maskA >> x & 1u) {
        if (occ) {
          a |= 1u << ia;
          parity += b_seen;
        }
        ++ia;
      } else {
        if (occ) {
          b |= 1u << ib;
          ++b_seen;
        }
        ++ib;
      }
    }
    Psi(a, b) = parity % 2 ? -psi(k) : psi(k);
  }
  const CMatrix rho = Psi * Psi.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd p = es.eigenvalues();
  if (renyi == 1) return xlogx_sum(p);
  double tr = 0.0;
  for (double v : p)
    if (v > 0.0) tr += std::pow(v, renyi);
  return std::log(tr) / (1.0 - renyi);
}

ExactObservables rdm_observables(const FockSector& sector, const StateVector& psi, const Region& A, const Region& B,
                                 const Region& C) {
  if (!B.disjoint(C)) throw InvalidArgument("rdm_observables: B and C overlap");
  ExactObservables o;
  o.S1 = region_entropy(sector, psi, A, 1);
  o.S2 = region_entropy(sector, psi, A, 2);
  o.mutinfo = region_entropy(sector, psi, B) + region_entropy(sector, psi, C) -
              region_entropy(sector, psi, B.united(C));

  auto mask_of = [](const Region& r) {
    std::uint32_t m = 0;
    for (int x : r.sites) m |= 1u << x;
    return m;
  };
  const std::uint32_t mA = mask_of(A), mB = mask_of(B), mC = mask_of(C);
  double mean = 0.0, nb = 0.0, nc = 0.0, nbnc = 0.0;
  std::vector<double> prob(sector.sites() + 1, 0.0);
  for (int k = 0; k < sector.dim(); ++k) {
    const std::uint32_t s = sector.state(k);
    const double w = std::norm(psi(k));
    prob[std::popcount(s & mA)] += w;
    const double b = std::popcount(s & mB), c = std::popcount(s & mC);
    nb += w * b;
    nc += w * c;
    nbnc += w * b * c;
  }
  for (std::size_t n = 0; n < prob.size(); ++n) mean += prob[n] * n;
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t n = 0; n < prob.size(); ++n) {
    const double d = n - mean;
    m2 += prob[n] * d * d;
    m4 += prob[n] * d * d * d * d;
  }
  o.C2 = m2;
  o.C4 = m4 - 3.0 * m2 * m2;
  o.covG = -(nbnc - nb * nc);
  return o;
}

std::vector<double> tdhf_short_time_errors(const ModelParams& params, std::uint64_t seed,
                                           const std::vector<double>& times, const TdhfOptions& options) {
  const ExactOracle oracle(params);
  const int L = params.L, N = params.particle_number();
  CounterRng rng(seed);
  std::normal_distribution<double> normal;
  CMatrix A(L, N);
  for (int i = 0; i < L; ++i)
    for (int k = 0; k < N; ++k) A(i, k) = cplx(normal(rng), normal(rng));
  const CMatrix Phi = Eigen::HouseholderQR<CMatrix>(A).householderQ() * CMatrix::Identity(L, N);
  const StateVector psi0 = oracle.slater_state(Phi);
  const CorrelationMatrix D0 = oracle.correlation(psi0);

  const TdhfPropagator prop(build_hamiltonian(params), interaction_matrix(params), options);
  std::vector<double> errs;
  for (double t : times) {
    CorrelationMatrix D = D0;
    prop.advance(D, t);
    const CorrelationMatrix Dx = oracle.correlation(oracle.evolve(psi0, t));
    errs.push_back((Dx - D).cwiseAbs().maxCoeff());
  }
  return errs;
}

OracleCheckReport oracle_check(const OracleCheckConfig& cfg) {
  if (cfg.L > kOracleMaxSites) throw InvalidArgument("oracle-check: L must be <= 12");
  OracleCheckReport rep;
  auto fail = [&](const std::string& what) {
    rep.passed = false;
    rep.failures.push_back(what);
  };

  ModelParams free;
  free.L = cfg.L;
  free.gamma = cfg.gamma;
  free.V = 0.0;
  free.n0 = 0.5;
  free.validate();
  ProtocolConfig proto;
  proto.warmup = cfg.warmup;
  proto.obs_interval = cfg.obs_interval;
  proto.t_max = cfg.t_max;
  proto.n_traj = cfg.n_traj;
  proto.master_seed = cfg.seed;
  proto.validate();

  const std::vector<ObservableId> ids{ObservableId::parse("S1"), ObservableId::parse("C2"),
                                      ObservableId::parse("covG")};
  const ProbePlan plan(free, ids);
  const ExactOracle oracle(free);
  const Region A = Region::half_cut(free.L), B = Region::third_B(free.L), C = Region::third_C(free.L);

  for (Representation repr : {Representation::Orbital, Representation::Dense}) {
    for (int i = 0; i < cfg.n_traj; ++i) {
      const MemberInputs in = member_inputs(free, proto, i);
      TrajectoryOptions opt;
      opt.representation = repr;
      opt.record_events = true;
      std::vector<CorrelationMatrix> snaps;
      opt.on_probe = [&](double, const CorrelationMatrix& D) { snaps.push_back(D); };
      const TrajectoryRecord rec = run_trajectory(free, in.occupations, in.schedule, in.probes, in.outcome_rng, &plan, opt);

      StateVector psi = oracle.product_state(in.occupations);
      double t = 0.0;
      std::size_t e = 0;
      for (std::size_t p = 0; p < in.probes.size(); ++p) {
        for (; e < rec.events.size() && rec.events[e].t <= in.probes[p]; ++e) {
          const MeasurementEvent& ev = rec.events[e];
          psi = oracle.evolve(psi, ev.t - t);
          t = ev.t;
          const MeasurementEvent mine = oracle.measure(psi, ev.site, 0.0, ev.outcome);
          rep.max_dp = std::max(rep.max_dp, std::abs(mine.p_click - ev.p_click));
        }
        psi = oracle.evolve(psi, in.probes[p] - t);
        t = in.probes[p];
        const ExactObservables ex = rdm_observables(oracle.sector(), psi, A, B, C);
        rep.max_dS = std::max(rep.max_dS, std::abs(ex.S1 - rec.values[p][0]));
        rep.max_dC2 = std::max(rep.max_dC2, std::abs(ex.C2 - rec.values[p][1]));
        rep.max_dG = std::max(rep.max_dG, std::abs(ex.covG - rec.values[p][2]));
        rep.max_dD = std::max(rep.max_dD, (oracle.correlation(psi) - snaps[p]).cwiseAbs().maxCoeff());
        ++rep.probes;
      }
    }
  }
  auto gate = [&](const char* name, double v) {
    if (!(v < cfg.tolerance)) {
      std::ostringstream os;
      os << name << " = " << v << " exceeds " << cfg.tolerance;
      fail(os.str());
    }
  };
  gate("max |dS|", rep.max_dS);
  gate("max |dC2|", rep.max_dC2);
  gate("max |dG|", rep.max_dG);
  gate("max |dD|", rep.max_dD);
  gate("max |dp|", rep.max_dp);

  if (cfg.V > 0.0) {
    rep.interacting = true;
    ModelParams inter = free;
    inter.V = cfg.V;
    TdhfOptions topt;
    topt.abs_tol = 1e-12;
    topt.rel_tol = 1e-12;
    topt.flip_fock_sign = cfg.flip_fock_sign;
    const std::vector<double> times{0.05, 0.1, 0.2};
    const std::vector<double> errs = tdhf_short_time_errors(inter, cfg.seed, times, topt);
    rep.hf_error_slope = std::log(errs.back() / errs.front()) / std::log(times.back() / times.front());
    // Mean-field error from a Slater state starts at second order.
    if (!(rep.hf_error_slope >= 1.7)) {
      std::ostringstream os;
      os << "TDHF short-time error slope " << rep.hf_error_slope << " < 1.7";
      fail(os.str());
    }
    const ExactOracle ioracle(inter);
    const MemberInputs in = member_inputs(inter, proto, 0);
    StateVector psi = ioracle.product_state(in.occupations);
    CounterRng urng = in.outcome_rng;
    double t = 0.0;
    for (const ScheduledMeasurement& m : in.schedule) {
      const double e0 = ioracle.energy(psi);
      for (int k = 1; k <= 4; ++k) {
        const StateVector mid = ioracle.evolve(psi, (m.t - t) * k / 4.0);
        rep.oracle_energy_drift = std::max(rep.oracle_energy_drift, std::abs(ioracle.energy(mid) - e0));
      }
      psi = ioracle.evolve(psi, m.t - t);
      t = m.t;
      ioracle.measure(psi, m.site, urng.uniform());
    }
    if (!(rep.oracle_energy_drift < 1e-10)) fail("oracle energy not conserved between measurements");
  }
  return rep;
}

}  // namespace monferm
