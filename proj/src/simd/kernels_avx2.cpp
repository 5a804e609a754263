// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace monferm::simd::detail {
namespace {

// Two complex doubles per register, laid out [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// even lanes minus odd lanes
inline double hdiff(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(s, _mm_unpackhi_pd(s, s)));
}

void caxpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p0 = cmul(ar, ai, load2(x + i));
    const __m256d p1 = cmul(ar, ai, load2(x + i + 2));
    store2(y + i, _mm256_add_pd(load2(y + i), p0));
    store2(y + i + 2, _mm256_add_pd(load2(y + i + 2), p1));
  }
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(ar, ai, load2(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

void caxpy_conj_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const __m256d odd_sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xc = _mm256_xor_pd(load2(x + i), odd_sign);
    store2(y + i, _mm256_add_pd(load2(y + i), cmul(ar, ai, xc)));
  }
  for (; i < n; ++i) y[i] += a * std::conj(x[i]);
}

cplx cdotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = load2(x + i), x1 = load2(x + i + 2);
    const __m256d y0 = load2(y + i), y1 = load2(y + i + 2);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    re1 = _mm256_fmadd_pd(x1, y1, re1);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
    im1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = load2(x + i), y0 = load2(y + i);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
  }
  cplx result(hdiff(_mm256_add_pd(re0, re1)), hsum(_mm256_add_pd(im0, im1)));
  for (; i < n; ++i) result += x[i] * y[i];
  return result;
}

cplx cdotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = load2(x + i), x1 = load2(x + i + 2);
    const __m256d y0 = load2(y + i), y1 = load2(y + i + 2);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    re1 = _mm256_fmadd_pd(x1, y1, re1);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
    im1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = load2(x + i), y0 = load2(y + i);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
  }
  cplx result(hsum(_mm256_add_pd(re0, re1)), hdiff(_mm256_add_pd(im0, im1)));
  for (; i < n; ++i) result += std::conj(x[i]) * y[i];
  return result;
}

double cnorm2_avx2(const cplx* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = load2(x + i), x1 = load2(x + i + 2);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = load2(x + i);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void cscal_avx2(cplx a, cplx* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, cmul(ar, ai, load2(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{caxpy_avx2, caxpy_conj_avx2, cdotu_avx2,
                                 cdotc_avx2, cnorm2_avx2,     cscal_avx2};
  return table;
}

}  // namespace monferm::simd::detail
