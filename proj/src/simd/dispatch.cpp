#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"
#include "monferm/simd.hpp"

namespace monferm::simd {
namespace {

bool cpu_has_avx2() {
#if defined(MONFERM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(MONFERM_HAVE_AVX2)
    case Isa::Avx2:
      return detail::avx2_kernels();
#endif
#if defined(MONFERM_HAVE_NEON)
    case Isa::Neon:
      return detail::neon_kernels();
#endif
    default:
      return detail::scalar_kernels();
  }
}

Isa initial_isa() {
  // MONFERM_ISA=scalar pins the reference kernels for a whole process.
  if (const char* env = std::getenv("MONFERM_ISA")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (v == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
  }
  return detected_isa();
}

struct State {
  std::atomic<Isa> isa{initial_isa()};
  std::atomic<const detail::KernelTable*> table{&table_for(isa.load())};
};

State& state() {
  static State s;
  return s;
}

inline const detail::KernelTable& kernels() { return *state().table.load(std::memory_order_relaxed); }

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd kernel: operand lengths differ");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
    case Isa::Neon:
#if defined(MONFERM_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return state().isa.load(); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("ISA not available: " + std::string(isa_name(isa)));
  state().isa.store(isa);
  state().table.store(&table_for(isa));
}

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(x.size(), y.size());
  kernels().caxpy(a, x.data(), y.data(), x.size());
}

void caxpy_conj(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(x.size(), y.size());
  kernels().caxpy_conj(a, x.data(), y.data(), x.size());
}

cplx cdotu(std::span<const cplx> x, std::span<const cplx> y) {
  check_sizes(x.size(), y.size());
  return kernels().cdotu(x.data(), y.data(), x.size());
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  check_sizes(x.size(), y.size());
  return kernels().cdotc(x.data(), y.data(), x.size());
}

double cnorm2(std::span<const cplx> x) { return kernels().cnorm2(x.data(), x.size()); }

void cscal(cplx a, std::span<cplx> x) { kernels().cscal(a, x.data(), x.size()); }

}  // namespace monferm::simd
