#include "monferm/model.hpp"

#include <cmath>
#include <numbers>

#include "monferm/errors.hpp"

namespace monferm {

std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw InvalidArgument("unknown boundary '" + s + "' (expected open|periodic)");
}

int ModelParams::particle_number() const { return static_cast<int>(std::lround(L * n0)); }

namespace {

void check_lattice(const ModelParams& p) {
  if (p.L < 2) throw InvalidArgument("L must be >= 2");
  if (p.boundary == Boundary::Periodic) {
    if (p.L < 3 && p.J1 != 0.0) throw InvalidArgument("periodic chain needs L >= 3 (bond collision)");
    if (p.L < 5 && p.J2 != cplx{}) throw InvalidArgument("periodic chain with J2 needs L >= 5 (bond collision)");
  }
}

}  // namespace

void ModelParams::validate() const {
  check_lattice(*this);
  if (!std::isfinite(J1) || !std::isfinite(J2.real()) || !std::isfinite(J2.imag()))
    throw InvalidArgument("hoppings must be finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be > 0");
  if (!(V >= 0.0) || !std::isfinite(V)) throw InvalidArgument("V must be >= 0");
  if (!(n0 >= 0.0 && n0 <= 1.0)) throw InvalidArgument("n0 must lie in [0, 1]");
  if (std::abs(L * n0 - std::round(L * n0)) > 1e-9) throw InvalidArgument("L * n0 must be an integer");
}

CMatrix build_hamiltonian(const ModelParams& p) {
  check_lattice(p);
  const int L = p.L;
  CMatrix h = CMatrix::Zero(L, L);
  auto bond = [&](int x, int y, cplx t) {
    h(x, y) += -t;
    h(y, x) += -std::conj(t);
  };
  const bool periodic = p.boundary == Boundary::Periodic;
  for (int x = 0; x < L; ++x) {
    if (x + 1 < L || periodic) bond(x, (x + 1) % L, p.J1);
    if (p.J2 != cplx{} && (x + 2 < L || periodic)) bond(x, (x + 2) % L, p.J2);
  }
  // Bit-exact Hermiticity regardless of the accumulation order above.
  CMatrix herm = 0.5 * (h + h.adjoint());
  for (int i = 0; i < L; ++i) herm(i, i) = herm(i, i).real();
  return herm;
}

double dispersion(const ModelParams& p, double k) {
  return -2.0 * p.J1 * std::cos(k) - 2.0 * std::real(p.J2 * std::polar(1.0, 2.0 * k));
}

double group_velocity(const ModelParams& p, double k) {
  return 2.0 * p.J1 * std::sin(k) + 4.0 * std::imag(p.J2 * std::polar(1.0, 2.0 * k));
}

std::string to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::AIII:
      return "AIII";
    case SymmetryClass::BDI:
      return "BDI";
    case SymmetryClass::InteractingAIII:
      return "AIII+int";
  }
  return "?";
}

SymmetryClass classify_symmetry(const ModelParams& p) {
  if (p.V > 0.0) return SymmetryClass::InteractingAIII;
  // The staggered gauge diag(i^x) is only single-valued around a ring when
  // 4 | L, so the test runs on the open-chain bulk of the same hoppings.
  ModelParams bulk = p;
  bulk.boundary = Boundary::Open;
  bulk.L = std::max(p.L, 8);
  const CMatrix h = build_hamiltonian(bulk);
  const int L = bulk.L;
  static constexpr cplx kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  CMatrix hg(L, L);
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y) hg(x, y) = std::conj(kPow[x % 4]) * h(x, y) * kPow[y % 4];
  const double skew = (hg.transpose() + hg).cwiseAbs().maxCoeff();
  return skew <= 1e-12 ? SymmetryClass::BDI : SymmetryClass::AIII;
}

CharacteristicScales characteristic_scales(const ModelParams& p, int n_k) {
  if (!(p.gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (n_k < 8) throw InvalidArgument("n_k too small");
  double acc = 0.0;
  for (int i = 0; i < n_k; ++i) {
    const double v = group_velocity(p, 2.0 * std::numbers::pi * i / n_k);
    acc += v * v;
  }
  CharacteristicScales s;
  s.v0 = std::sqrt(acc / n_k);
  s.ell0 = s.v0 / (2.0 * p.gamma);
  s.Ddiff = s.v0 * s.v0 / (2.0 * p.gamma);
  // v0 / gamma reduces to sqrt(2) J1 / gamma for the nearest-neighbour chain.
  s.g0 = p.n0 * (1.0 - p.n0) * s.v0 / p.gamma;
  return s;
}

}  // namespace monferm
