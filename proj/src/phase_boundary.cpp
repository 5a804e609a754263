#include "monferm/phase_boundary.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "monferm/errors.hpp"
#include "monferm/rg_flow.hpp"

namespace monferm {

std::vector<PhaseBoundaryPoint> phase_boundary(const std::vector<double>& gamma_grid, const ModelParams& templ,
                                               const PhaseBoundaryOptions& o) {
  if (!(templ.J1 > 0.0)) throw InvalidArgument("phase_boundary: J1 must be > 0");
  if (!(o.ell_loc_prefactor > 0.0) || !(o.ell_int_prefactor > 0.0))
    throw InvalidArgument("phase_boundary: prefactors must be > 0");
  if (!(o.V_min > 0.0) || !(o.V_max > o.V_min)) throw InvalidArgument("phase_boundary: bad V window");
  YhfIntegrator yhf_1d(1, o.yhf);
  std::vector<PhaseBoundaryPoint> out;
  for (double gamma : gamma_grid) {
    if (!(gamma > 0.0 && gamma <= templ.J1)) throw InvalidArgument("phase_boundary: gamma must lie in (0, J1]");
    ModelParams p = templ;
    p.gamma = gamma;
    p.V = 0.0;
    p.validate();
    const CharacteristicScales s = characteristic_scales(p);

    PhaseBoundaryPoint pt;
    pt.gamma = gamma;
    const FreeFlowResult flow = flow_free(s.g0, SymmetryClass::AIII, 0.0, s.ell0, o.G_stop);
    pt.ell_loc = o.ell_loc_prefactor * flow.ell_loc;
    pt.ln_ell_loc = std::log(pt.ell_loc);
    pt.yhf_reduced = yhf_1d.reduced(gamma / p.J1);

    // m is linear in V, so ln ell_int = ln ell_int(V = 1) - ln V; working in
    // logs keeps V down to 1e-300 representable.
    const InteractionScales unit = interaction_scales(p, pt.yhf_reduced / p.J1);
    if (!unit.ell_int) {
      out.push_back(pt);
      continue;
    }
    const double ln_ell_int_1 = std::log(o.ell_int_prefactor * *unit.ell_int);
    auto ln_ell_int = [&](double lnV) { return ln_ell_int_1 - lnV; };
    // ell_int decreases with V.
    auto f = [&](double lnV) { return ln_ell_int(lnV) - pt.ln_ell_loc; };
    const double lo = std::log(o.V_min), hi = std::log(o.V_max);
    const double f_lo = f(lo), f_hi = f(hi);
    if (f_lo >= 0.0 && f_hi <= 0.0) {
      boost::uintmax_t iters = 200;
      const auto [a, b] =
          boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iters);
      pt.V_c = std::exp(0.5 * (a + b));
    }
    out.push_back(pt);
  }
  return out;
}

BoundaryFit fit_boundary(const std::vector<PhaseBoundaryPoint>& points, double gamma_lo, double gamma_hi) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (!p.V_c || p.gamma < gamma_lo || p.gamma > gamma_hi) continue;
    xs.push_back(1.0 / p.gamma);
    ys.push_back(std::log(*p.V_c / std::sqrt(p.gamma)));
  }
  if (xs.size() < 2) throw NumericalFailure("fit_boundary: fewer than two crossings in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  BoundaryFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = static_cast<int>(xs.size());
  return fit;
}

}  // namespace monferm
