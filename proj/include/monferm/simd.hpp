#pragma once
// Complex double-precision vector kernels used by the trajectory engines.
//
// Every kernel has a scalar reference implementation; AVX2/FMA and NEON
// variants are compiled when the target supports them and are picked at
// runtime. The variants are tested for equivalence against the scalar path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace monferm::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Best instruction set available on this CPU and compiled into the binary.
Isa detected_isa();

/// Instruction set currently used by the dispatched kernels.
Isa active_isa();

/// Overrides kernel selection (tests and benchmarks). Throws
/// std::invalid_argument if the requested variant is not available.
void force_isa(Isa isa);

bool isa_available(Isa isa);

// y += a * x
void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

// y += a * conj(x)
void caxpy_conj(cplx a, std::span<const cplx> x, std::span<cplx> y);

// sum_i x_i * y_i (no conjugation)
cplx cdotu(std::span<const cplx> x, std::span<const cplx> y);

// sum_i conj(x_i) * y_i
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);

// sum_i |x_i|^2
double cnorm2(std::span<const cplx> x);

// x *= a
void cscal(cplx a, std::span<cplx> x);

/// RAII guard restoring the previously active ISA.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { force_isa(isa); }
  ~ScopedIsa() { force_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace monferm::simd
