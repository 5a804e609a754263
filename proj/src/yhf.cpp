#include "monferm/yhf.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "monferm/errors.hpp"

namespace monferm {

namespace {

constexpr double kPi = std::numbers::pi;
using GK61 = boost::math::quadrature::gauss_kronrod<double, 61>;

// (1/pi) int_0^pi f(tau cos(k/2)) dk, split into panels short enough to
// resolve the Bessel oscillations.
template <class F>
double angular_average(double tau, F f) {
  const int panels = 1 + static_cast<int>(std::ceil(tau / 4.0));
  const double w = kPi / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double err = 0.0;
    total += GK61::integrate([&](double k) { return f(tau * std::cos(0.5 * k)); }, p * w, (p + 1) * w, 3, 1e-11, &err);
  }
  return total / kPi;
}

}  // namespace

double yhf_I0(double tau) {
  if (tau == 0.0) return 1.0;
  return angular_average(tau, [](double x) {
    const double j = std::cyl_bessel_j(0.0, x);
    return j * j;
  });
}

double yhf_I1(double tau) {
  if (tau == 0.0) return 0.25;
  return angular_average(tau, [](double x) {
    const double r = std::abs(x) < 1e-8 ? 0.5 : std::cyl_bessel_j(1.0, x) / x;
    return r * r;
  });
}

double yhf_I(double tau, int d) { return 2.0 * d * std::pow(yhf_I0(tau), d - 1) * yhf_I1(tau); }

double yhf_I_asymptotic(double tau, int d) {
  return d * std::pow(2.0, d + 3) / (3.0 * std::pow(kPi, 2 * d)) * std::pow(std::log(tau), d - 1) / std::pow(tau, d);
}

YhfIntegrator::YhfIntegrator(int d, YhfOptions options) : d_(d), opt_(options) {
  if (d < 1 || d > 3) throw InvalidArgument("yhf: d must be 1, 2 or 3");
  if (!(opt_.tau_start > 1.0) || !(opt_.tau_cap >= opt_.tau_start) || !(opt_.match_tol > 0.0))
    throw InvalidArgument("yhf: bad tail options");
  // Smallest tau_start * 2^k at which numeric and asymptotic forms agree
  // (checked at tau and 1.5 tau). Otherwise the tail amplitude is matched
  // at the cap.
  auto rel = [&](double tau) { return I_cached(tau) / yhf_I_asymptotic(tau, d_) - 1.0; };
  double tau = opt_.tau_start;
  for (; tau <= opt_.tau_cap; tau *= 2.0) {
    if (std::abs(rel(tau)) < opt_.match_tol && std::abs(rel(1.5 * tau)) < opt_.match_tol) {
      tau_switch_ = tau;
      matched_ = true;
      return;
    }
  }
  tau_switch_ = opt_.tau_cap;
  matched_ = false;
  tail_scale_ = I_cached(tau_switch_) / yhf_I_asymptotic(tau_switch_, d_);
}

double YhfIntegrator::I_cached(double tau) {
  auto it = cache_.find(tau);
  if (it != cache_.end()) return it->second;
  const double v = yhf_I(tau, d_);
  cache_.emplace(tau, v);
  return v;
}

double YhfIntegrator::reduced(double z) {
  if (!(z > 0.0)) throw InvalidArgument("yhf: z must be > 0");
  // Fixed composite rule on [0, tau_switch]: unit panels up to 2, then
  // octaves split into 8 sub-panels. Node positions do not depend on z.
  std::vector<std::pair<double, double>> panels{{0.0, 1.0}, {1.0, 2.0}};
  for (double a = 2.0; a < tau_switch_; a *= 2.0) {
    const double b = std::min(2.0 * a, tau_switch_);
    for (int i = 0; i < 8; ++i) panels.emplace_back(a + (b - a) * i / 8.0, a + (b - a) * (i + 1) / 8.0);
  }
  double head = 0.0;
  for (auto [a, b] : panels) {
    double err = 0.0;
    head += GK61::integrate([&](double t) { return std::exp(-z * t) * I_cached(t); }, a, b, 0, 0.0, &err);
  }
  boost::math::quadrature::exp_sinh<double> tail_rule;
  const double scale = tail_scale_;
  double tail_err = 0.0;
  const double tail = tail_rule.integrate(
      [&](double t) { return std::exp(-z * t) * scale * yhf_I_asymptotic(t, d_); }, tau_switch_,
      std::numeric_limits<double>::infinity(), 1e-12, &tail_err);
  if (!std::isfinite(head) || !std::isfinite(tail)) throw NumericalFailure("yhf: quadrature failed");
  return head + tail;
}

YhfResult yhf(double z, int d, double V, double J, const YhfOptions& options) {
  if (!(z > 0.0 && z <= 1.0)) throw InvalidArgument("yhf: z = gamma/J must lie in (0, 1]");
  if (!(J > 0.0)) throw InvalidArgument("yhf: J must be > 0");
  YhfIntegrator integ(d, options);
  YhfResult r;
  r.reduced = integ.reduced(z);
  r.Y = V * V / J * r.reduced;
  r.tau_switch = integ.tau_switch();
  r.matched = integ.matched();
  r.tail_scale = integ.tail_scale();
  return r;
}

InteractionScales interaction_scales(const ModelParams& params, double Yhf) {
  if (!(Yhf >= 0.0)) throw InvalidArgument("interaction_scales: Y_HF must be >= 0");
  const CharacteristicScales s = characteristic_scales(params);
  InteractionScales out;
  out.Yhf = Yhf;
  out.m = std::sqrt(2.0 * params.n0 * (1.0 - params.n0) * Yhf / s.Ddiff);
  if (out.m > 0.0) out.ell_int = 1.0 / out.m;
  return out;
}

}  // namespace monferm
