#pragma once
// Hartree-Fock mass integral and the interaction length scale.

#include <map>
#include <optional>

#include "monferm/model.hpp"

namespace monferm {

// I0(tau) = (1/pi) int_0^pi J0(tau cos(k/2))^2 dk
double yhf_I0(double tau);
// I1(tau) = (1/pi) int_0^pi [J1(x)/x]^2 dk, x = tau cos(k/2)
double yhf_I1(double tau);
// I(tau) = 2 d I0^(d-1) I1
double yhf_I(double tau, int d);
// Large-tau form d 2^(d+3) / (3 pi^(2d)) ln^(d-1)(tau) / tau^d.
double yhf_I_asymptotic(double tau, int d);

struct YhfOptions {
  double tau_start = 16.0;
  double tau_cap = 128.0;
  double match_tol = 0.01;
};

struct YhfResult {
  double Y = 0.0;           // Y_HF in energy units
  double reduced = 0.0;     // Y_HF J / V^2
  double tau_switch = 0.0;
  bool matched = true;      // false: tail amplitude rescaled at tau_cap
  double tail_scale = 1.0;
};

// Memoizes I(tau) on a fixed quadrature grid, so sweeps over z are cheap.
class YhfIntegrator {
 public:
  explicit YhfIntegrator(int d, YhfOptions options = {});

  int dimension() const { return d_; }
  double tau_switch() const { return tau_switch_; }
  bool matched() const { return matched_; }
  double tail_scale() const { return tail_scale_; }

  // int_0^inf exp(-z tau) I(tau) dtau
  double reduced(double z);

 private:
  double I_cached(double tau);

  int d_;
  YhfOptions opt_;
  double tau_switch_ = 0.0;
  bool matched_ = true;
  double tail_scale_ = 1.0;
  std::map<double, double> cache_;
};

// z = gamma / J, 0 < z <= 1, d in {1, 2, 3}.
YhfResult yhf(double z, int d, double V, double J, const YhfOptions& options = {});

struct InteractionScales {
  double Yhf = 0.0;
  double m = 0.0;
  std::optional<double> ell_int;  // absent when m = 0
};

// m = sqrt(2 n0 (1 - n0) Y / D). Throws InvalidArgument for Y < 0.
InteractionScales interaction_scales(const ModelParams& params, double Yhf);

}  // namespace monferm
