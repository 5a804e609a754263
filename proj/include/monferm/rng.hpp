#pragma once
// Counter-based splittable generator. Output i of a stream is a pure
// function of (key, i), so a trajectory's randomness does not depend on
// which worker runs it or in what order streams are consumed.

#include <cmath>
#include <cstdint>
#include <limits>

namespace monferm {

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGolden * ++counter_); }

  // Independent child stream i. Does not advance this stream.
  CounterRng split(std::uint64_t i) const {
    CounterRng child(0);
    child.key_ = mix(key_ ^ mix(i + 0x9e3779b97f4a7c15ULL) ^ 0xbb67ae8584caa73bULL);
    return child;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do r = (*this)();
    while (r >= limit);
    return r % n;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Substream indices used by a trajectory.
namespace stream {
inline constexpr std::uint64_t kInitialState = 0;
inline constexpr std::uint64_t kSchedule = 1;
inline constexpr std::uint64_t kOutcomes = 2;
inline constexpr std::uint64_t kBootstrap = 0xb0075;
}  // namespace stream

}  // namespace monferm
