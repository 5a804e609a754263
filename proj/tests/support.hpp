#pragma once
// Hand-rolled generators for the property tests.

#include <cmath>
#include <random>
#include <vector>

#include "monferm/correlation.hpp"
#include "monferm/rng.hpp"

namespace monferm::testing {

inline double uniform(CounterRng& r, double lo, double hi) { return lo + (hi - lo) * r.uniform(); }

inline cplx gaussian_c(CounterRng& r) {
  std::normal_distribution<double> n;
  const double re = n(r), im = n(r);
  return {re, im};
}

inline CMatrix random_matrix(CounterRng& r, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gaussian_c(r);
  return m;
}

inline CMatrix random_hermitian(CounterRng& r, int n) {
  const CMatrix a = random_matrix(r, n, n);
  return 0.5 * (a + a.adjoint());
}

// L x N matrix with orthonormal columns.
inline CMatrix random_orbitals(CounterRng& r, int L, int N) {
  const CMatrix a = random_matrix(r, L, N);
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(L, N);
}

// Pure Gaussian state D = M M^dag with N particles.
inline CorrelationMatrix random_slater(CounterRng& r, int L, int N) {
  const CMatrix M = random_orbitals(r, L, N);
  return M * M.adjoint();
}

// Mixed Gaussian state with eigenvalues drawn from (0, 1).
inline CorrelationMatrix random_mixed(CounterRng& r, int L) {
  const CMatrix U = random_orbitals(r, L, L);
  Eigen::VectorXd lam(L);
  for (int i = 0; i < L; ++i) lam(i) = r.uniform();
  return U * lam.cast<cplx>().asDiagonal() * U.adjoint();
}

inline std::vector<int> random_half_filling(CounterRng& r, int L) {
  std::vector<int> occ(L, 0);
  std::vector<int> idx(L);
  for (int i = 0; i < L; ++i) idx[i] = i;
  for (int i = 0; i < L / 2; ++i) {
    const int j = i + static_cast<int>(r.below(static_cast<std::uint64_t>(L - i)));
    std::swap(idx[i], idx[j]);
    occ[idx[i]] = 1;
  }
  return occ;
}

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace monferm::testing
