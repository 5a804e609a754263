// Generated by tools/gen_bernoulli_cumulants.py. Do not edit.
#pragma once

#include <array>

namespace monferm::detail {

// kBernoulliCumulants[i][j]: coefficient of p^j in the cumulant of order 2(i+1).
inline constexpr std::array<std::array<double, 9>, 4> kBernoulliCumulants{{
    {{0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}},  // order 2
    {{0.0, 1.0, -7.0, 12.0, -6.0, 0.0, 0.0, 0.0, 0.0}},  // order 4
    {{0.0, 1.0, -31.0, 180.0, -390.0, 360.0, -120.0, 0.0, 0.0}},  // order 6
    {{0.0, 1.0, -127.0, 1932.0, -10206.0, 25200.0, -31920.0, 20160.0, -5040.0}},  // order 8
}};

}  // namespace monferm::detail
