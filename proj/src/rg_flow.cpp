#include "monferm/rg_flow.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "monferm/errors.hpp"

namespace monferm {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;

using State = std::vector<double>;
using Rhs = std::function<void(const State&, State&, double)>;
// An event fires when its function becomes <= 0.
using Event = std::function<double(const State&)>;

struct EventHit {
  int which = -1;  // index of the event that fired, -1 if none
  double s = 0.0;
  State y;
};

// Adaptive Dormand-Prince with dense output; event times located by
// bisection on the interpolant. Step endpoints are appended to curve.
EventHit integrate_events(const Rhs& rhs, State y, double s0, double s_max, const std::vector<Event>& events,
                          double abs_tol, double rel_tol, std::vector<State>* curve, std::vector<double>* times) {
  for (std::size_t e = 0; e < events.size(); ++e)
    if (events[e](y) <= 0.0) return {static_cast<int>(e), s0, y};
  if (curve) {
    curve->push_back(y);
    times->push_back(s0);
  }
  auto stepper = odeint::make_dense_output(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(y, s0, 1e-3);
  State probe(y.size());
  long steps = 0;
  while (stepper.current_time() < s_max) {
    if (++steps > 10'000'000) throw NumericalFailure("flow integration: step budget exhausted");
    const auto [t_prev, t_curr] = stepper.do_step(rhs);
    const State& yc = stepper.current_state();
    for (double v : yc)
      if (!std::isfinite(v)) throw NumericalFailure("flow integration diverged");
    int first = -1;
    double t_first = t_curr;
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (events[e](yc) > 0.0) continue;
      double lo = t_prev, hi = t_curr;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, probe);
        (events[e](probe) <= 0.0 ? hi : lo) = mid;
      }
      if (first < 0 || hi < t_first) {
        first = static_cast<int>(e);
        t_first = hi;
      }
    }
    if (first >= 0) {
      stepper.calc_state(t_first, probe);
      if (curve) {
        curve->push_back(probe);
        times->push_back(t_first);
      }
      return {first, t_first, probe};
    }
    if (curve) {
      curve->push_back(yc);
      times->push_back(t_curr);
    }
  }
  return {-1, stepper.current_time(), stepper.current_state()};
}

}  // namespace

double free_flow_coefficient(SymmetryClass cls, double R) {
  switch (cls) {
    case SymmetryClass::BDI:
      return R / (2.0 * kPi);
    case SymmetryClass::AIII:
    case SymmetryClass::InteractingAIII:
      return R / (4.0 * kPi);
  }
  return 0.0;
}

FreeFlowResult flow_free(double G0, SymmetryClass cls, double eps, double ell0, double G_stop, double R,
                         const FlowOptions& o) {
  if (!(G0 > 0.0)) throw InvalidArgument("flow_free: G0 must be > 0");
  if (!(ell0 > 0.0)) throw InvalidArgument("flow_free: ell0 must be > 0");
  const double c = free_flow_coefficient(cls, R);
  Rhs rhs = [&](const State& y, State& dy, double) { dy[0] = eps * y[0] - c; };
  std::vector<Event> events{[&](const State& y) { return y[0] - G_stop; }};
  std::vector<State> pts;
  std::vector<double> ts;
  const EventHit hit = integrate_events(rhs, {G0}, 0.0, o.ln_ell_max, events, o.abs_tol, o.rel_tol, &pts, &ts);
  if (hit.which < 0) throw NumericalFailure("flow_free: G did not reach G_stop before ell_max");
  FreeFlowResult res;
  for (std::size_t i = 0; i < pts.size(); ++i) res.curve.push_back({ts[i], pts[i][0], 0.0});
  res.ell_loc = ell0 * std::exp(hit.s);
  return res;
}

std::string to_string(InteractingOutcome o) {
  return o == InteractingOutcome::CouplingDominated ? "coupling-dominated" : "mass-dominated";
}

InteractingFlowResult flow_interacting(double G0, double u0, int d, double ell0, double G_stop,
                                       const FlowOptions& o) {
  if (!(G0 > 0.0)) throw InvalidArgument("flow_interacting: G0 must be > 0");
  if (!(u0 >= 0.0)) throw InvalidArgument("flow_interacting: u0 must be >= 0");
  if (d < 1) throw InvalidArgument("flow_interacting: d must be >= 1");
  InteractingFlowResult res;
  if (u0 == 0.0) {
    // u = 0 is invariant; the coupling follows the free AIII flow.
    const FreeFlowResult f = flow_free(G0, SymmetryClass::AIII, d - 1.0, ell0, G_stop, 1.0, o);
    res.outcome = InteractingOutcome::CouplingDominated;
    res.ell_star = f.ell_loc;
    res.curve = f.curve;
    return res;
  }
  const double eps = d - 1.0;
  Rhs rhs = [&](const State& y, State& dy, double) {
    dy[0] = eps * y[0] - 1.0 / (4.0 * kPi);
    dy[1] = 1.0 - 7.0 / (8.0 * kPi * y[0]);
  };
  std::vector<Event> events{[&](const State& y) { return y[0] - G_stop; }, [](const State& y) { return -y[1]; }};
  std::vector<State> pts;
  std::vector<double> ts;
  const EventHit hit =
      integrate_events(rhs, {G0, std::log(u0)}, 0.0, o.ln_ell_max, events, o.abs_tol, o.rel_tol, &pts, &ts);
  if (hit.which < 0) throw NumericalFailure("flow_interacting: neither stop condition reached before ell_max");
  res.outcome = hit.which == 0 ? InteractingOutcome::CouplingDominated : InteractingOutcome::MassDominated;
  res.ell_star = ell0 * std::exp(hit.s);
  for (std::size_t i = 0; i < pts.size(); ++i) res.curve.push_back({ts[i], pts[i][0], std::exp(pts[i][1])});
  return res;
}

std::string to_string(BktSide s) {
  switch (s) {
    case BktSide::Delocalized:
      return "delocalized";
    case BktSide::Localized:
      return "localized";
    case BktSide::Critical:
      return "critical";
  }
  return "?";
}

double bkt_invariant(double g, double kappa) {
  return 0.5 * kappa * kappa + (3.0 * kPi * g - 2.0) / (3.0 * g * g * g);
}

double bkt_separatrix_value() { return kPi * kPi * kPi / 3.0; }

BktResult flow_bkt(double g0, double kappa0, const BktOptions& o) {
  if (!(g0 > 0.0)) throw InvalidArgument("flow_bkt: g0 must be > 0");
  if (!(kappa0 >= 0.0)) throw InvalidArgument("flow_bkt: kappa0 must be >= 0");
  BktResult res;
  res.c = bkt_invariant(g0, kappa0);
  const double gc = 1.0 / kPi;
  const double sep = bkt_separatrix_value();

  if (std::abs(res.c - sep) <= o.separatrix_tol) {
    res.side = BktSide::Critical;
    res.g_infinity = gc;
  } else if (kappa0 == 0.0) {
    res.side = g0 > gc ? BktSide::Delocalized : BktSide::Localized;
    if (g0 > gc) res.g_infinity = g0;
  } else if (res.c > sep || g0 < gc) {
    res.side = BktSide::Localized;
  } else {
    res.side = BktSide::Delocalized;
    // Root of (3 pi g - 2) / (3 g^3) = c on g > 1/pi, where the left side
    // decreases monotonically from pi^3/3 to 0.
    auto f = [&](double g) { return bkt_invariant(g, 0.0) - res.c; };
    double hi = std::max(2.0 * g0, 2.0 * gc);
    while (f(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 1e12) throw NumericalFailure("flow_bkt: could not bracket g(infinity)");
    }
    boost::uintmax_t iters = 200;
    const auto [lo_root, hi_root] =
        boost::math::tools::toms748_solve(f, gc, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    res.g_infinity = 0.5 * (lo_root + hi_root);
  }

  Rhs rhs = [](const State& y, State& dy, double) {
    const double g = y[0], k = y[1];
    dy[0] = -k * k * g * g * g * g;
    dy[1] = 2.0 * (1.0 - kPi * g) * k;
  };
  std::vector<Event> events;
  if (res.side == BktSide::Localized && kappa0 > 0.0)
    events.push_back([&](const State& y) { return o.kappa_stop - y[1]; });
  std::vector<State> pts;
  std::vector<double> ts;
  const double s_end = res.side == BktSide::Localized && kappa0 > 0.0 ? 1e4 : o.ln_ell_span;
  const EventHit hit = integrate_events(rhs, {g0, kappa0}, 0.0, s_end, events, o.abs_tol, o.rel_tol, &pts, &ts);
  if (res.side == BktSide::Localized && kappa0 > 0.0) {
    if (hit.which < 0) throw NumericalFailure("flow_bkt: kappa never reached kappa_stop");
    res.ell_C = std::exp(hit.s);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    res.curve.push_back({ts[i], pts[i][0], pts[i][1]});
    res.max_c_drift = std::max(res.max_c_drift, std::abs(bkt_invariant(pts[i][0], pts[i][1]) - res.c));
  }
  return res;
}

}  // namespace monferm
