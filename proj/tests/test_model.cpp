#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "monferm/errors.hpp"
#include "monferm/model.hpp"
#include "support.hpp"

using namespace monferm;

namespace {

ModelParams chain(int L, double J1, cplx J2, Boundary b = Boundary::Open) {
  ModelParams p;
  p.L = L;
  p.J1 = J1;
  p.J2 = J2;
  p.boundary = b;
  p.n0 = 0.0;
  return p;
}

// Independent closed form of the plane-wave energy.
double eps_closed(double J1, cplx J2, double k) {
  return -2.0 * J1 * std::cos(k) - 2.0 * (J2 * std::polar(1.0, 2.0 * k)).real();
}

}  // namespace

TEST_CASE("open three-site chain") {
  const CMatrix h = build_hamiltonian(chain(3, 1.0, 0.0));
  CMatrix expect(3, 3);
  expect << 0, -1, 0, -1, 0, -1, 0, -1, 0;
  CHECK(testing::max_abs(h - expect) == 0.0);
}

TEST_CASE("no hopping gives the zero matrix") {
  CHECK(testing::max_abs(build_hamiltonian(chain(2, 0.0, 0.0))) == 0.0);
}

TEST_CASE("periodic chain spectrum equals the dispersion") {
  for (auto [J1, J2] : {std::pair<double, cplx>{1.0, 0.0}, {0.6, cplx(0, 0.4)}, {0.6, 0.4}}) {
    const int L = 6;
    const CMatrix h = build_hamiltonian(chain(L, J1, J2, Boundary::Periodic));
    CHECK(h == h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    std::vector<double> expect;
    for (int n = 0; n < L; ++n) expect.push_back(eps_closed(J1, J2, 2.0 * std::numbers::pi * n / L));
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < L; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-12));
    for (double k : {0.1, 1.3, 2.9})
      CHECK(dispersion(chain(L, J1, J2, Boundary::Periodic), k) == doctest::Approx(eps_closed(J1, J2, k)));
  }
}

TEST_CASE("J2 = 0 periodic dispersion is -2 J1 cos k") {
  const ModelParams p = chain(8, 0.7, 0.0, Boundary::Periodic);
  for (double k : {0.0, 0.5, 2.0, 3.1}) CHECK(dispersion(p, k) == doctest::Approx(-1.4 * std::cos(k)));
}

TEST_CASE("Hamiltonian is bit-exactly Hermitian for random hoppings") {
  CounterRng r(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 5 + static_cast<int>(r.below(20));
    const ModelParams p = chain(L, testing::uniform(r, -2, 2), testing::gaussian_c(r),
                                r.below(2) ? Boundary::Periodic : Boundary::Open);
    const CMatrix h = build_hamiltonian(p);
    CHECK(h == h.adjoint());
  }
}

TEST_CASE("lattice size errors") {
  CHECK_THROWS_AS(build_hamiltonian(chain(1, 1.0, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(build_hamiltonian(chain(4, 1.0, 0.3, Boundary::Periodic)), InvalidArgument);
  CHECK_THROWS_AS(build_hamiltonian(chain(2, 1.0, 0.0, Boundary::Periodic)), InvalidArgument);
  CHECK_NOTHROW(build_hamiltonian(chain(5, 1.0, 0.3, Boundary::Periodic)));
  CHECK_NOTHROW(build_hamiltonian(chain(4, 1.0, 0.3, Boundary::Open)));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.L = 5;
  p.n0 = 0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.n0 = 0.4;
  CHECK_NOTHROW(p.validate());
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.gamma = 0.5;
  p.V = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  CHECK_THROWS_AS(parse_boundary("twisted"), InvalidArgument);
}

TEST_CASE("symmetry class examples") {
  CHECK(classify_symmetry(chain(8, 0.6, cplx(0, 0.4))) == SymmetryClass::BDI);
  CHECK(classify_symmetry(chain(8, 0.6, 0.4)) == SymmetryClass::AIII);
  CHECK(classify_symmetry(chain(8, 1.0, 0.0)) == SymmetryClass::BDI);
  ModelParams p = chain(8, 1.0, 0.0);
  p.V = 0.5;
  CHECK(classify_symmetry(p) == SymmetryClass::InteractingAIII);
  CHECK(to_string(SymmetryClass::BDI) == "BDI");
}

TEST_CASE("symmetry class property over random hoppings") {
  CounterRng r(22);
  for (int trial = 0; trial < 200; ++trial) {
    double J1 = testing::uniform(r, -2, 2);
    if (std::abs(J1) < 1e-3) J1 = 1.0;
    const double a = testing::uniform(r, 0.05, 2) * (r.below(2) ? 1 : -1);
    const double b = testing::uniform(r, 0.05, 2) * (r.below(2) ? 1 : -1);
    const int L = 6 + static_cast<int>(r.below(10));
    const Boundary bc = r.below(2) ? Boundary::Periodic : Boundary::Open;
    // Purely imaginary next-nearest hopping keeps the chiral symmetry.
    CHECK(classify_symmetry(chain(L, J1, cplx(0, b), bc)) == SymmetryClass::BDI);
    // A real part breaks it, with or without an imaginary part.
    CHECK(classify_symmetry(chain(L, J1, cplx(a, b), bc)) == SymmetryClass::AIII);
    CHECK(classify_symmetry(chain(L, J1, cplx(a, 0), bc)) == SymmetryClass::AIII);
  }
}

TEST_CASE("characteristic scales of the nearest-neighbour chain") {
  ModelParams p = chain(8, 1.0, 0.0);
  p.gamma = 0.1;
  p.n0 = 0.5;
  const auto s = characteristic_scales(p);
  CHECK(s.v0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.ell0 == doctest::Approx(7.0710678118654755).epsilon(1e-12));
  CHECK(s.g0 == doctest::Approx(3.5355339059327378).epsilon(1e-12));
  CHECK(s.Ddiff == doctest::Approx(10.0).epsilon(1e-12));
  p.n0 = 0.0;
  CHECK(characteristic_scales(p).g0 == 0.0);
  p.gamma = 0.0;
  CHECK_THROWS_AS(characteristic_scales(p), InvalidArgument);
}

TEST_CASE("v0 matches a fine finite-difference quadrature of the dispersion") {
  for (cplx J2 : {cplx(0, 0.4), cplx(0.4, 0), cplx(0.3, -0.2)}) {
    ModelParams p = chain(8, 0.6, J2);
    const int n = 1'000'000;
    const double h = 1e-5;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = 2.0 * std::numbers::pi * (i + 0.5) / n;
      const double v = (eps_closed(0.6, J2, k + h) - eps_closed(0.6, J2, k - h)) / (2.0 * h);
      acc += v * v;
    }
    CHECK(characteristic_scales(p).v0 == doctest::Approx(std::sqrt(acc / n)).epsilon(1e-8));
  }
}

TEST_CASE("scales are homogeneous in (J1, J2, gamma)") {
  CounterRng r(23);
  for (int trial = 0; trial < 30; ++trial) {
    ModelParams p = chain(8, testing::uniform(r, 0.1, 2), testing::gaussian_c(r));
    p.gamma = testing::uniform(r, 0.05, 1);
    p.n0 = 0.5;
    const double c = testing::uniform(r, 0.2, 5);
    ModelParams q = p;
    q.J1 *= c;
    q.J2 *= c;
    q.gamma *= c;
    const auto a = characteristic_scales(p), b = characteristic_scales(q);
    CHECK(b.g0 == doctest::Approx(a.g0).epsilon(1e-12));
    CHECK(b.v0 == doctest::Approx(c * a.v0).epsilon(1e-12));
    CHECK(a.Ddiff == doctest::Approx(a.v0 * a.v0 / (2 * p.gamma)).epsilon(1e-14));
  }
}

TEST_CASE("AIII and BDI parameter choices share v0") {
  const auto a = characteristic_scales(chain(8, 0.6, 0.4));
  const auto b = characteristic_scales(chain(8, 0.6, cplx(0, 0.4)));
  CHECK(a.v0 == doctest::Approx(b.v0).epsilon(1e-12));
  CHECK(a.v0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}
