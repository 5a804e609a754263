#pragma once
// One-loop flows of the coupling G (free and with the interaction-induced
// mass u) and the BKT flow of (g, kappa). The integration variable is
// s = ln(ell / ell0).

#include <optional>
#include <string>
#include <vector>

#include "monferm/model.hpp"

namespace monferm {

struct FlowPoint {
  double ln_ell = 0.0;  // ln(ell / ell0)
  double a = 0.0;       // G or g
  double b = 0.0;       // u or kappa (unused for the free flow)
};

struct FlowOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double ln_ell_max = 1e4;
};

struct FreeFlowResult {
  std::vector<FlowPoint> curve;
  double ell_loc = 0.0;  // ell at G = G_stop, in the units of ell0
};

// dG/dln(ell) = eps G - R c, c = 1/(4 pi) for AIII and 1/(2 pi) for BDI.
// Throws NumericalFailure if G never reaches G_stop before ln_ell_max.
FreeFlowResult flow_free(double G0, SymmetryClass cls, double eps, double ell0, double G_stop = 1.0, double R = 1.0,
                         const FlowOptions& options = {});

double free_flow_coefficient(SymmetryClass cls, double R = 1.0);

enum class InteractingOutcome { CouplingDominated, MassDominated };
std::string to_string(InteractingOutcome o);

struct InteractingFlowResult {
  InteractingOutcome outcome = InteractingOutcome::CouplingDominated;
  double ell_star = 0.0;
  std::vector<FlowPoint> curve;
};

// dG/dln(ell) = (d - 1) G - 1/(4 pi), dln u/dln(ell) = 1 - 7/(8 pi G).
// Stops at G <= G_stop or u >= 1. With u0 = 0 the free AIII flow is used.
InteractingFlowResult flow_interacting(double G0, double u0, int d, double ell0 = 1.0, double G_stop = 1.0,
                                       const FlowOptions& options = {});

enum class BktSide { Delocalized, Localized, Critical };
std::string to_string(BktSide s);

struct BktOptions {
  double ln_ell_span = 20.0;   // e-folds integrated for the curve
  double kappa_stop = 1.0;     // ell_C is where kappa reaches this
  double separatrix_tol = 1e-7;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
};

struct BktResult {
  BktSide side = BktSide::Critical;
  double c = 0.0;
  std::optional<double> g_infinity;
  std::optional<double> ell_C;  // in units of the starting scale
  std::vector<FlowPoint> curve;  // a = g, b = kappa
  double max_c_drift = 0.0;
};

// c = kappa^2 / 2 + (3 pi g - 2) / (3 g^3)
double bkt_invariant(double g, double kappa);
// pi^3 / 3, the maximum of the g-dependent part of c.
double bkt_separatrix_value();

// dkappa/dln(ell) = 2 (1 - pi g) kappa, dg/dln(ell) = -kappa^2 g^4.
BktResult flow_bkt(double g0, double kappa0, const BktOptions& options = {});

}  // namespace monferm
