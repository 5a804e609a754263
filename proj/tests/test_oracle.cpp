#include <doctest.h>

#include <bit>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "monferm/errors.hpp"
#include "monferm/oracle.hpp"
#include "support.hpp"

using namespace monferm;
using testing::max_abs;

namespace {

// Jordan-Wigner annihilators on the full 2^L space. Basis index bit x is
// n_x, so site 0 is the least significant Kronecker factor.
std::vector<CMatrix> jw_annihilators(int L) {
  CMatrix a = CMatrix::Zero(2, 2), Z = CMatrix::Identity(2, 2), I = CMatrix::Identity(2, 2);
  a(0, 1) = 1.0;
  Z(1, 1) = -1.0;
  std::vector<CMatrix> c;
  for (int x = 0; x < L; ++x) {
    CMatrix op = CMatrix::Identity(1, 1);
    for (int y = L - 1; y >= 0; --y) {
      const CMatrix& f = y == x ? a : (y < x ? Z : I);
      op = Eigen::kroneckerProduct(op, f).eval();
    }
    c.push_back(op);
  }
  return c;
}

ModelParams chain(int L, double V = 0.0, double n0 = 0.5) {
  ModelParams p;
  p.L = L;
  p.V = V;
  p.n0 = n0;
  return p;
}

}  // namespace

TEST_CASE("Jordan-Wigner operators are canonical") {
  const auto c = jw_annihilators(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CMatrix ac = c[i] * c[j].adjoint() + c[j].adjoint() * c[i];
      CHECK(max_abs(ac - CMatrix::Identity(16, 16) * (i == j ? 1.0 : 0.0)) == 0.0);
    }
}

TEST_CASE("hop signs match the Jordan-Wigner oracle") {
  const int L = 6;
  const auto c = jw_annihilators(L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      const CMatrix op = c[i].adjoint() * c[j];
      for (std::uint32_t s = 0; s < (1u << L); ++s) {
        std::uint32_t t = 0;
        int sign = 0;
        const bool alive = apply_hop(s, i, j, t, sign);
        const Eigen::Index col = s;
        if (!alive) {
          CHECK(op.col(col).cwiseAbs().maxCoeff() == 0.0);
          continue;
        }
        CHECK(op(t, col) == cplx(sign, 0));
        CHECK(op.col(col).cwiseAbs().sum() == 1.0);
      }
    }
}

TEST_CASE("sector Hamiltonian matches the Jordan-Wigner construction") {
  ModelParams p = chain(6, 0.8);
  p.J2 = cplx(0.3, -0.2);
  p.boundary = Boundary::Periodic;
  const ExactOracle o(p);
  const auto c = jw_annihilators(6);
  const CMatrix h = build_hamiltonian(p);
  CMatrix H = CMatrix::Zero(64, 64);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) H += h(i, j) * c[i].adjoint() * c[j];
  const RMatrix Vm = interaction_matrix(p);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      H += Vm(i, j) * (c[i].adjoint() * c[i]) * (c[j].adjoint() * c[j]);
  const FockSector& sec = o.sector();
  CHECK(sec.dim() == 20);
  double worst = 0.0;
  for (int a = 0; a < sec.dim(); ++a)
    for (int b = 0; b < sec.dim(); ++b) worst = std::max(worst, std::abs(o.hamiltonian()(a, b) - H(sec.state(a), sec.state(b))));
  CHECK(worst < 1e-14);
}

TEST_CASE("Fock sector indexing") {
  const FockSector s(8, 3);
  CHECK(s.dim() == 56);
  for (int k = 0; k < s.dim(); ++k) {
    CHECK(std::popcount(s.state(k)) == 3);
    CHECK(s.index(s.state(k)) == k);
  }
  CHECK(s.index(0b1111) == -1);
  CHECK_THROWS_AS(ExactOracle(chain(14)), InvalidArgument);
}

TEST_CASE("single particle on two sites") {
  const ExactOracle o(chain(2));
  const StateVector psi0 = o.product_state({1, 0});
  for (double t : {0.1, 0.7, 2.0}) {
    const StateVector psi = o.evolve(psi0, t);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK(o.click_probability(psi, 1) == doctest::Approx(std::pow(std::sin(t), 2)).epsilon(1e-12));
  }
}

TEST_CASE("diagonal limit: only a phase") {
  ModelParams p = chain(4, 5.0);
  p.J1 = 0.0;
  const ExactOracle o(p);
  const StateVector psi0 = o.product_state({1, 1, 0, 0});
  const StateVector psi = o.evolve(psi0, 0.9);
  const int k = o.sector().index(0b0011);
  CHECK(std::abs(psi(k) - std::exp(cplx(0, -5.0 * 0.9))) < 1e-12);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("many-body measurement examples") {
  const ExactOracle o(chain(2));
  StateVector bell(2);
  bell << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  // Sector basis: bit x is n_x, one particle.
  CHECK(max_abs(o.correlation(bell) - CorrelationMatrix::Constant(2, 2, 0.5)) < 1e-15);

  StateVector a = bell;
  CHECK(o.measure(a, 0, 0.2).outcome == Outcome::Click);
  CHECK(max_abs(o.correlation(a) - init_product_state({1, 0})) < 1e-15);
  StateVector b = bell;
  CHECK(o.measure(b, 0, 0.8).outcome == Outcome::NoClick);
  CHECK(max_abs(o.correlation(b) - init_product_state({0, 1})) < 1e-15);

  StateVector c = o.product_state({1, 0});
  const StateVector before = c;
  CHECK(o.measure(c, 0, 0.99).outcome == Outcome::Click);
  CHECK(max_abs(c - before) == 0.0);
  CHECK_THROWS_AS(o.measure(c, 1, 0.5, Outcome::Click), std::logic_error);
}

TEST_CASE("many-body Bell pair observables") {
  const ModelParams p = chain(2);
  const ExactOracle o(p);
  StateVector bell(2);
  bell << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const Region A = Region::range(0, 1), B = Region::range(1, 2);
  const ExactObservables e = rdm_observables(o.sector(), bell, A, A, B);
  CHECK(e.S1 == doctest::Approx(std::numbers::ln2).epsilon(1e-13));
  CHECK(e.S2 == doctest::Approx(std::numbers::ln2).epsilon(1e-13));
  CHECK(e.C2 == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(e.C4 == doctest::Approx(-0.125).epsilon(1e-13));
  CHECK(e.covG == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(e.mutinfo == doctest::Approx(2 * std::numbers::ln2).epsilon(1e-13));

  const ExactOracle o4(chain(4));
  const ExactObservables z = rdm_observables(o4.sector(), o4.product_state({1, 0, 0, 1}), Region::range(0, 2),
                                             Region::range(0, 1), Region::range(3, 4));
  CHECK(std::abs(z.S1) + std::abs(z.S2) + std::abs(z.C2) + std::abs(z.C4) + std::abs(z.covG) + std::abs(z.mutinfo) < 1e-14);
}

TEST_CASE("Slater states agree with the gaussian description") {
  CounterRng r(1);
  for (int L : {4, 6, 8, 10}) {
    const ModelParams p = chain(L);
    const ExactOracle o(p);
    const CMatrix Phi = testing::random_orbitals(r, L, L / 2);
    const StateVector psi0 = o.slater_state(Phi);
    CHECK(std::abs(psi0.norm() - 1.0) < 1e-12);
    const CorrelationMatrix D0 = Phi.conjugate() * Phi.transpose();
    CHECK(max_abs(o.correlation(psi0) - D0) < 1e-12);

    const double dt = 0.37;
    const StateVector psi = o.evolve(psi0, dt);
    const CorrelationMatrix D = evolve_unitary(D0, build_hamiltonian(p), dt);
    CHECK(max_abs(o.correlation(psi) - D) < 1e-10);

    const Region A = Region::half_cut(L), B = Region::third_B(L), C = Region::third_C(L);
    const ExactObservables e = rdm_observables(o.sector(), psi, A, B, C);
    CHECK(std::abs(e.S1 - entanglement_entropy(D, A)) < 1e-8);
    CHECK(std::abs(e.S2 - entanglement_entropy(D, A, 2)) < 1e-8);
    CHECK(std::abs(region_entropy(o.sector(), psi, A, 3) - entanglement_entropy(D, A, 3)) < 1e-8);
    const auto cum = charge_cumulants(D, A, 4);
    CHECK(std::abs(e.C2 - cum[0]) < 1e-8);
    CHECK(std::abs(e.C4 - cum[1]) < 1e-8);
    CHECK(std::abs(e.covG - covariance_G(D, B, C)) < 1e-8);
    CHECK(std::abs(e.mutinfo - mutual_information(D, B, C)) < 1e-8);

    // Measurement at the many-body level reproduces the gaussian collapse.
    for (int x = 0; x < L; ++x) {
      StateVector m = psi;
      CorrelationMatrix Dm = D;
      const double u = r.uniform();
      const MeasurementEvent a = o.measure(m, x, u);
      const MeasurementEvent b = measure_site(Dm, x, u);
      CHECK(a.outcome == b.outcome);
      CHECK(std::abs(a.p_click - b.p_click) < 1e-12);
      CHECK(max_abs(o.correlation(m) - Dm) < 1e-10);
    }
  }
}

TEST_CASE("oracle conserves energy and norm with interactions") {
  CounterRng r(2);
  const ModelParams p = chain(8, 1.0);
  const ExactOracle o(p);
  StateVector psi = o.slater_state(testing::random_orbitals(r, 8, 4));
  const double E0 = o.energy(psi);
  for (int k = 0; k < 10; ++k) {
    psi = o.evolve(psi, 0.5);
    CHECK(std::abs(o.energy(psi) - E0) < 1e-10);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK(std::abs(o.correlation(psi).trace().real() - 4.0) < 1e-12);
  }
}

TEST_CASE("oracle check passes and catches an injected Fock sign error") {
  OracleCheckConfig cfg;
  const OracleCheckReport good = oracle_check(cfg);
  CHECK(good.passed);
  CHECK(good.probes > 0);
  CHECK(good.max_dS < 1e-8);
  CHECK(good.max_dC2 < 1e-8);
  CHECK(good.max_dG < 1e-8);
  CHECK(good.hf_error_slope >= 1.7);
  CHECK(good.oracle_energy_drift < 1e-10);

  cfg.flip_fock_sign = true;
  const OracleCheckReport bad = oracle_check(cfg);
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.failures.empty());

  cfg = {};
  cfg.L = 13;
  CHECK_THROWS_AS(oracle_check(cfg), InvalidArgument);
}
