#include <doctest.h>

#include <memory>
#include <numbers>

#include "monferm/ensemble.hpp"
#include "monferm/errors.hpp"
#include "monferm/gaussian_engine.hpp"
#include "monferm/simd.hpp"
#include "support.hpp"

using namespace monferm;
using testing::max_abs;

namespace {

CorrelationMatrix half_pair() {
  CorrelationMatrix D(2, 2);
  D << 0.5, 0.5, 0.5, 0.5;
  return D;
}

ModelParams open_chain(int L, double gamma = 0.5) {
  ModelParams p;
  p.L = L;
  p.gamma = gamma;
  p.n0 = 0.5;
  return p;
}

void check_valid(const CorrelationMatrix& D, double trace) {
  const StateDiagnostics d = diagnose(D);
  CHECK(d.hermiticity < 1e-9);
  CHECK(d.eig_min > -1e-9);
  CHECK(d.eig_max < 1.0 + 1e-9);
  CHECK(std::abs(d.trace - trace) < 1e-10);
}

}  // namespace

TEST_CASE("product state initialisation") {
  const CorrelationMatrix D = init_product_state({1, 0, 1, 0});
  CHECK(max_abs(D - Eigen::Vector4d(1, 0, 1, 0).cast<cplx>().asDiagonal().toDenseMatrix()) == 0.0);
  CHECK(max_abs(init_product_state({0, 0, 0})) == 0.0);
  CounterRng r(1);
  CHECK(init_product_state(testing::random_half_filling(r, 8)).trace().real() == 4.0);
}

TEST_CASE("two-site unitary evolution") {
  CMatrix h(2, 2);
  h << 0, -1, -1, 0;
  for (double t : {0.0, 0.3, 1.1, 2.5}) {
    const CorrelationMatrix D = evolve_unitary(init_product_state({1, 0}), h, t);
    CHECK(D(1, 1).real() == doctest::Approx(std::pow(std::sin(t), 2)).epsilon(1e-13));
  }
}

TEST_CASE("a function of h is stationary") {
  CounterRng r(2);
  const CMatrix h = testing::random_hermitian(r, 6);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd f(6);
  for (int i = 0; i < 6; ++i) f(i) = 1.0 / (1.0 + std::exp(es.eigenvalues()(i)));
  const CMatrix D = es.eigenvectors().conjugate() * f.cast<cplx>().asDiagonal() * es.eigenvectors().transpose();
  CHECK(max_abs(evolve_unitary(D, h, 1.7) - D) < 1e-12);
}

TEST_CASE("unitary evolution preserves the spectrum and trace") {
  CounterRng r(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int L = 3 + static_cast<int>(r.below(12));
    const CMatrix h = testing::random_hermitian(r, L);
    const CorrelationMatrix D = testing::random_mixed(r, L);
    const CorrelationMatrix D2 = evolve_unitary(D, h, testing::uniform(r, 0, 5));
    Eigen::SelfAdjointEigenSolver<CMatrix> a(D, Eigen::EigenvaluesOnly), b(0.5 * (D2 + D2.adjoint()), Eigen::EigenvaluesOnly);
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
    check_valid(D2, D.trace().real());
  }
}

TEST_CASE("unitary evolution rejects bad input") {
  CMatrix h(2, 2);
  h << 0, 1, 0, 0;
  CHECK_THROWS_AS(evolve_unitary(half_pair(), h, 1.0), InvalidArgument);
  CHECK_THROWS_AS(evolve_unitary(half_pair(), CMatrix::Zero(2, 2), -1.0), InvalidArgument);
}

TEST_CASE("measurement examples") {
  CorrelationMatrix D = half_pair();
  apply_outcome(D, 0, Outcome::Click);
  CorrelationMatrix expect(2, 2);
  expect << 1, 0, 0, 0;
  CHECK(max_abs(D - expect) < 1e-15);

  D = half_pair();
  apply_outcome(D, 0, Outcome::NoClick);
  expect << 0, 0, 0, 1;
  CHECK(max_abs(D - expect) < 1e-15);

  // Occupied site: click for any u, state unchanged.
  D = init_product_state({1, 0, 1});
  for (double u : {0.0, 0.5, 0.999999}) {
    CorrelationMatrix E = D;
    const MeasurementEvent ev = measure_site(E, 0, u);
    CHECK(ev.outcome == Outcome::Click);
    CHECK(max_abs(E - D) == 0.0);
  }
}

TEST_CASE("Born rule threshold") {
  CorrelationMatrix D = half_pair();
  CHECK(measure_site(D, 0, 0.49).outcome == Outcome::Click);
  D = half_pair();
  CHECK(measure_site(D, 0, 0.51).outcome == Outcome::NoClick);
}

TEST_CASE("degenerate branches") {
  CHECK(draw_outcome(1e-13, 0.0) == Outcome::NoClick);
  CHECK(draw_outcome(1.0 - 1e-13, 0.999) == Outcome::Click);
  CorrelationMatrix D = init_product_state({0, 1});
  CHECK_THROWS_AS(apply_outcome(D, 0, Outcome::Click), std::logic_error);
  CHECK_THROWS_AS(apply_outcome(D, 1, Outcome::NoClick), std::logic_error);
}

TEST_CASE("measurement properties on random states") {
  CounterRng r(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = 2 + static_cast<int>(r.below(14));
    const int N = static_cast<int>(r.below(L + 1));
    CorrelationMatrix D = testing::random_slater(r, L, N);
    for (int m = 0; m < 5; ++m) {
      const int x = static_cast<int>(r.below(L));
      const double before = D(x, x).real();
      const MeasurementEvent ev = measure_site(D, x, r.uniform());
      CHECK(std::abs(ev.p_click - before) < 1e-12);
      check_valid(D, N);
      // Idempotence: repeating the outcome changes nothing.
      CorrelationMatrix again = D;
      apply_outcome(again, x, ev.outcome);
      CHECK(max_abs(again - D) == 0.0);
    }
  }
}

TEST_CASE("check_state aborts on a corrupted state") {
  CorrelationMatrix D = init_product_state({1, 0});
  CHECK_NOTHROW(check_state(D, 1, "test"));
  D(0, 0) = 1.1;
  CHECK_THROWS_AS(check_state(D, 1, "test"), TrajectoryAbort);
  CHECK_THROWS_AS(check_state(init_product_state({1, 0}), 2, "test"), TrajectoryAbort);
}

TEST_CASE("dense and orbital representations agree on random records") {
  CounterRng r(5);
  for (int trial = 0; trial < 12; ++trial) {
    ModelParams p;
    p.L = 4 + 2 * static_cast<int>(r.below(31));  // up to 64
    p.n0 = 0.5;
    p.J2 = r.below(2) ? cplx(0, 0.4) : cplx(0.3, 0.1);
    p.boundary = r.below(2) ? Boundary::Periodic : Boundary::Open;
    if (p.boundary == Boundary::Periodic && p.L < 5) p.boundary = Boundary::Open;
    auto prop = std::make_shared<SpectralPropagator>(build_hamiltonian(p));
    const std::vector<int> occ = testing::random_half_filling(r, p.L);
    DenseGaussianState dense(prop, init_product_state(occ));
    OrbitalFrame orb(prop, occ);
    double t = 0.0;
    for (int m = 0; m < 3 * p.L; ++m) {
      t += r.exponential(1.0);
      dense.advance_to(t);
      orb.advance_to(t);
      const int x = static_cast<int>(r.below(p.L));
      const double u = r.uniform();
      const MeasurementEvent a = dense.measure(x, u);
      const MeasurementEvent b = orb.measure(x, u, a.outcome);
      CHECK(std::abs(a.p_click - b.p_click) < 1e-8);
    }
    CHECK(max_abs(dense.correlation() - orb.correlation()) < 1e-8);
    CHECK(orb.orthonormality_error() < 1e-9);
    CHECK_NOTHROW(dense.check("dense"));
    CHECK_NOTHROW(orb.check("orbital"));
  }
}

TEST_CASE("orbital frame unitary step equals evolve_unitary") {
  CounterRng r(6);
  ModelParams p = open_chain(10);
  p.J2 = cplx(0.2, 0.3);
  const CMatrix h = build_hamiltonian(p);
  auto prop = std::make_shared<SpectralPropagator>(h);
  const std::vector<int> occ = testing::random_half_filling(r, 10);
  OrbitalFrame orb(prop, occ, 0.5);
  orb.advance_to(2.0);
  CHECK(max_abs(orb.correlation() - evolve_unitary(init_product_state(occ), h, 1.5)) < 1e-12);
  const CMatrix M = orb.orbitals();
  CHECK(max_abs(M * M.adjoint() - orb.correlation()) < 1e-13);
}

TEST_CASE("orbital frame refuses an impossible forced outcome") {
  auto prop = std::make_shared<SpectralPropagator>(build_hamiltonian(open_chain(4)));
  OrbitalFrame orb(prop, {1, 0, 1, 0});
  CHECK_THROWS_AS(orb.measure(1, 0.5, Outcome::Click), std::logic_error);
}

TEST_CASE("empty schedule reproduces pure unitary evolution") {
  const ModelParams p = open_chain(8);
  const std::vector<int> occ{1, 0, 1, 0, 1, 0, 1, 0};
  const ProbePlan plan(p, {ObservableId::parse("S1"), ObservableId::parse("C2")});
  const std::vector<double> probes{1.0, 2.5};
  for (auto repr : {Representation::Dense, Representation::Orbital}) {
    TrajectoryOptions opt;
    opt.representation = repr;
    const TrajectoryRecord rec = run_trajectory(p, occ, {}, probes, CounterRng(1), &plan, opt);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const CorrelationMatrix D = evolve_unitary(init_product_state(occ), build_hamiltonian(p), probes[k]);
      CHECK(rec.values[k][0] == doctest::Approx(entanglement_entropy(D, Region::half_cut(8))).epsilon(1e-10));
      CHECK(rec.values[k][1] == doctest::Approx(charge_cumulants(D, Region::half_cut(8), 2)[0]).epsilon(1e-10));
    }
  }
}

TEST_CASE("measurements at a probe time are applied before the probe") {
  const ModelParams p = open_chain(4);
  const ProbePlan plan(p, {ObservableId::parse("C2")});
  // Measuring every site at t = 1 leaves a product state, so C2 = 0.
  Schedule s;
  for (int x = 0; x < 4; ++x) s.push_back({1.0, x});
  const TrajectoryRecord rec = run_trajectory(p, {1, 1, 0, 0}, s, {1.0}, CounterRng(3), &plan);
  CHECK(std::abs(rec.values[0][0]) < 1e-12);
}

TEST_CASE("gaussian engine rejects interactions") {
  ModelParams p = open_chain(4);
  p.V = 1.0;
  CHECK_THROWS_AS(run_trajectory(p, {1, 0, 1, 0}, {}, {1.0}, CounterRng(1), nullptr), InvalidArgument);
}

TEST_CASE("trajectory results do not depend on the kernel variant") {
  std::vector<simd::Isa> isas{simd::Isa::Scalar};
  for (auto isa : {simd::Isa::Avx2, simd::Isa::Neon})
    if (simd::isa_available(isa)) isas.push_back(isa);
  const ModelParams p = open_chain(24);
  ProtocolConfig proto;
  proto.t_max = 30;
  proto.warmup = 5;
  const ProbePlan plan(p, {ObservableId::parse("S1"), ObservableId::parse("C2")});
  std::vector<std::vector<double>> ref;
  for (auto isa : isas) {
    simd::ScopedIsa g(isa);
    const TrajectoryRecord rec = run_member(p, proto, &plan, 0);
    if (ref.empty()) {
      ref = rec.values;
      continue;
    }
    for (std::size_t k = 0; k < ref.size(); ++k)
      for (std::size_t c = 0; c < ref[k].size(); ++c) CHECK(std::abs(rec.values[k][c] - ref[k][c]) < 1e-9);
  }
}
