// NEON (AArch64) variants: one complex double per 128-bit register.

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace monferm::simd::detail {
namespace {

inline float64x2_t load1(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void store1(cplx* p, float64x2_t v) { vst1q_f64(reinterpret_cast<double*>(p), v); }

// (ar + i ai) * (xr + i xi) with x = [xr, xi]
inline float64x2_t cmul(double ar, double ai, float64x2_t x) {
  const float64x2_t swapped = vextq_f64(x, x, 1);  // [xi, xr]
  const float64x2_t signed_ai = {-ai, ai};
  return vfmaq_f64(vmulq_n_f64(x, ar), swapped, signed_ai);
}

void caxpy_neon(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    store1(y + i, vaddq_f64(load1(y + i), cmul(a.real(), a.imag(), load1(x + i))));
}

void caxpy_conj_neon(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t conj_sign = {1.0, -1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xc = vmulq_f64(load1(x + i), conj_sign);
    store1(y + i, vaddq_f64(load1(y + i), cmul(a.real(), a.imag(), xc)));
  }
}

cplx cdotu_neon(const cplx* x, const cplx* y, std::size_t n) {
  float64x2_t re = vdupq_n_f64(0.0), im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = load1(x + i), yv = load1(y + i);
    re = vfmaq_f64(re, xv, yv);
    im = vfmaq_f64(im, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(re, 0) - vgetq_lane_f64(re, 1), vaddvq_f64(im)};
}

cplx cdotc_neon(const cplx* x, const cplx* y, std::size_t n) {
  float64x2_t re = vdupq_n_f64(0.0), im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = load1(x + i), yv = load1(y + i);
    re = vfmaq_f64(re, xv, yv);
    im = vfmaq_f64(im, xv, vextq_f64(yv, yv, 1));
  }
  return {vaddvq_f64(re), vgetq_lane_f64(im, 0) - vgetq_lane_f64(im, 1)};
}

double cnorm2_neon(const cplx* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = load1(x + i);
    acc = vfmaq_f64(acc, xv, xv);
  }
  return vaddvq_f64(acc);
}

void cscal_neon(cplx a, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) store1(x + i, cmul(a.real(), a.imag(), load1(x + i)));
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{caxpy_neon, caxpy_conj_neon, cdotu_neon,
                                 cdotc_neon, cnorm2_neon,     cscal_neon};
  return table;
}

}  // namespace monferm::simd::detail
