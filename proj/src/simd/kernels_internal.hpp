#pragma once

#include <complex>
#include <cstddef>

namespace monferm::simd::detail {

using cplx = std::complex<double>;

struct KernelTable {
  void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  void (*caxpy_conj)(cplx a, const cplx* x, cplx* y, std::size_t n);
  cplx (*cdotu)(const cplx* x, const cplx* y, std::size_t n);
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
  double (*cnorm2)(const cplx* x, std::size_t n);
  void (*cscal)(cplx a, cplx* x, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(MONFERM_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(MONFERM_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

}  // namespace monferm::simd::detail
