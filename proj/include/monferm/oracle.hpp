#pragma once
// Exact many-body reference in a fixed particle-number sector, L <= 12.
// Basis state bit x is n_x; the fermionic order is ascending in x.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monferm/observables.hpp"
#include "monferm/trajectory.hpp"

namespace monferm {

inline constexpr int kOracleMaxSites = 12;

class FockSector {
 public:
  FockSector(int L, int N);

  int sites() const { return L_; }
  int particles() const { return N_; }
  int dim() const { return static_cast<int>(states_.size()); }
  std::uint32_t state(int k) const { return states_[k]; }
  int index(std::uint32_t mask) const { return index_[mask]; }  // -1 outside the sector

 private:
  int L_, N_;
  std::vector<std::uint32_t> states_;
  std::vector<int> index_;
};

// c_i^dag c_j applied to a basis state. Returns false if it annihilates it.
bool apply_hop(std::uint32_t s, int i, int j, std::uint32_t& out, int& sign);

using StateVector = CVector;

class ExactOracle {
 public:
  // H = sum_ij h_ij c_i^dag c_j + V sum_<xy> n_x n_y over the bonds of
  // interaction_matrix(params). Throws InvalidArgument for L > 12.
  explicit ExactOracle(const ModelParams& params);

  const FockSector& sector() const { return sector_; }
  const CMatrix& hamiltonian() const { return H_; }

  StateVector product_state(const std::vector<int>& occupations) const;
  // Slater determinant of the columns of Phi (L x N); D = conj(Phi) Phi^T.
  StateVector slater_state(const CMatrix& Phi) const;

  StateVector evolve(const StateVector& psi, double dt) const;
  double click_probability(const StateVector& psi, int x) const;
  // Projects onto n_x = outcome and renormalizes. Forbidden branches throw
  // std::logic_error as in apply_outcome.
  MeasurementEvent measure(StateVector& psi, int x, double u, std::optional<Outcome> forced = std::nullopt) const;

  double energy(const StateVector& psi) const;
  CorrelationMatrix correlation(const StateVector& psi) const;

 private:
  ModelParams params_;
  FockSector sector_;
  CMatrix H_;
  Eigen::VectorXd E_;
  CMatrix U_;
};

// Von Neumann (renyi = 1) or Renyi entropy of the reduced density matrix.
double region_entropy(const FockSector& sector, const StateVector& psi, const Region& A, int renyi = 1);

struct ExactObservables {
  double S1 = 0.0, S2 = 0.0;  // of A
  double C2 = 0.0, C4 = 0.0;  // of N_A
  double covG = 0.0;          // -Cov(N_B, N_C)
  double mutinfo = 0.0;       // I(B : C)
};

ExactObservables rdm_observables(const FockSector& sector, const StateVector& psi, const Region& A, const Region& B,
                                 const Region& C);

// Shared-record comparison of the engines against the oracle.
struct OracleCheckConfig {
  int L = 8;
  double gamma = 0.5;
  double V = 1.0;  // used by the interacting checks; the free comparison runs at V = 0
  std::uint64_t seed = 1;
  int n_traj = 5;
  double warmup = 2.0;        // units of 1/gamma
  double obs_interval = 1.0;  // units of 1/gamma
  double t_max = 10.0;        // units of 1/gamma
  double tolerance = 1e-8;
  bool flip_fock_sign = false;
};

struct OracleCheckReport {
  int probes = 0;
  double max_dS = 0.0;
  double max_dC2 = 0.0;
  double max_dG = 0.0;
  double max_dD = 0.0;
  double max_dp = 0.0;  // Born probabilities
  bool interacting = false;
  double hf_error_slope = 0.0;  // log-log slope of max |D_exact - D_HF| over short times
  double oracle_energy_drift = 0.0;
  bool passed = true;
  std::vector<std::string> failures;
};

OracleCheckReport oracle_check(const OracleCheckConfig& config);

// Short-time error of TDHF against exact evolution from a random Slater
// state: max |D_exact(t) - D_HF(t)| at each time.
std::vector<double> tdhf_short_time_errors(const ModelParams& params, std::uint64_t seed,
                                           const std::vector<double>& times, const TdhfOptions& options);

}  // namespace monferm
