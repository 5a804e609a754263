#pragma once
// Time-dependent Hartree-Fock evolution of the interacting chain. The
// state stays Gaussian, so measurements reuse the free collapse of D.

#include <memory>
#include <optional>
#include <vector>

#include "monferm/correlation.hpp"

namespace monferm {

using RMatrix = Eigen::MatrixXd;

// Vmat_{x,x+1} = Vmat_{x+1,x} = V on every nearest-neighbour bond.
RMatrix interaction_matrix(const ModelParams& p);

struct HFState {
  CorrelationMatrix D;
  RMatrix Vmat;
};

struct TdhfOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double max_step = 0.1;
  // Mutation hook for the oracle self-test: flips the sign of the Fock term.
  bool flip_fock_sign = false;
};

// h_eff = h0 + diag(sum_l V_il D_ll) - V o D^T (Hartree plus exchange).
CMatrix hf_hamiltonian(const HFState& s, const CMatrix& h0, bool flip_fock_sign = false);

// E = sum_ij h0_ij D_ij + 1/2 sum_ij V_ij (D_ii D_jj - |D_ij|^2)
double hf_energy(const HFState& s, const CMatrix& h0);

// Integrator with the sparsity pattern of h_eff precomputed.
class TdhfPropagator {
 public:
  TdhfPropagator(const CMatrix& h0, RMatrix Vmat, TdhfOptions options = {});

  // Integrates dD/dt = i [h_eff(D)^T, D] over dt. Throws TrajectoryAbort if
  // the step size underflows.
  void advance(CorrelationMatrix& D, double dt) const;

  const CMatrix& h0() const { return h0_; }
  const RMatrix& vmat() const { return V_; }
  const TdhfOptions& options() const { return opt_; }

  // Right-hand side on a row-major flattened D (exposed for tests).
  // scratch is resized to L*L and reused across calls.
  void rhs(const cplx* d, cplx* dddt, std::vector<cplx>& scratch) const;

 private:
  struct Entry {
    int row, col;  // entry (row, col) of h_eff
    cplx h0;
    double v;
  };
  CMatrix h0_;
  RMatrix V_;
  TdhfOptions opt_;
  int L_;
  std::vector<Entry> entries_;
};

void step_tdhf(HFState& s, const CMatrix& h0, double dt, const TdhfOptions& options = {});

MeasurementEvent measure_site_hf(HFState& s, int x, double u);

class TdhfState {
 public:
  // A pure D0 (D0^2 = D0) is kept pure: the integrator does not conserve
  // idempotence exactly, so each advance ends with McWeeny purification.
  TdhfState(std::shared_ptr<const TdhfPropagator> prop, CorrelationMatrix D0, double t0 = 0.0);

  void advance_to(double t);
  MeasurementEvent measure(int x, double u, std::optional<Outcome> forced = std::nullopt);
  CorrelationMatrix correlation() const { return D_; }
  double time() const { return t_; }
  int particles() const { return n_; }
  double energy() const;
  void check(const char* where) const { check_state(D_, n_, where); }

 private:
  std::shared_ptr<const TdhfPropagator> prop_;
  CorrelationMatrix D_;
  double t_;
  int n_;
  bool pure_;
};

}  // namespace monferm
