#pragma once
// Observables of a Gaussian state given its correlation matrix D.
// Entropies are in nats.

#include <span>
#include <string>
#include <vector>

#include "monferm/correlation.hpp"

namespace monferm {

struct Region {
  std::vector<int> sites;  // sorted, unique

  static Region range(int begin, int end);
  static Region half_cut(int L);  // first L/2 sites
  static Region third_B(int L);   // first floor(L/3) sites
  static Region third_C(int L);   // last floor(L/3) sites

  Region united(const Region& other) const;
  bool disjoint(const Region& other) const;
  int size() const { return static_cast<int>(sites.size()); }
  void validate(int L) const;
};

// Eigenvalues of D restricted to the region, clamped into [0, 1] when they
// stray by less than 1e-9. Larger violations throw TrajectoryAbort.
Eigen::VectorXd region_spectrum(const CorrelationMatrix& D, const Region& A);

double entropy_from_spectrum(const Eigen::VectorXd& lambdas, int renyi_index = 1);
std::vector<double> cumulants_from_spectrum(const Eigen::VectorXd& lambdas, int max_order);

double entanglement_entropy(const CorrelationMatrix& D, const Region& A, int renyi_index = 1);

// Returns {C2, C4, ...} up to max_order (even, <= 8).
std::vector<double> charge_cumulants(const CorrelationMatrix& D, const Region& A, int max_order);

// ln <exp(i lambda N_A)> on each grid point.
std::vector<cplx> fcs_log_generating(const CorrelationMatrix& D, const Region& A, std::span<const double> grid);

// Sum over i in B, j in C of |D_ij|^2.
double covariance_G(const CorrelationMatrix& D, const Region& B, const Region& C);

double mutual_information(const CorrelationMatrix& D, const Region& B, const Region& C);

// sum_{q=1..q_max} 2 zeta(2q) C^(2q), q_max <= 4.
double klich_levitov_sum(const CorrelationMatrix& D, const Region& A, int q_max);

// Translation-averaged connected density correlator of one state,
// C(x) for x = 0..L-1. Periodic chains only.
std::vector<double> density_correlator_snapshot(const CorrelationMatrix& D);

struct CorrelatorCurves {
  std::vector<double> Cx;  // x = 0..L-1
  std::vector<double> q;   // 2 pi k / L, k = 0..L/2
  std::vector<double> Cq;
  std::vector<double> gq;  // Cq / q; entry k = 0 is unused (0)
};

CorrelatorCurves correlator_from_cx(const std::vector<double>& Cx);

// Averages snapshots (each a C_traj(x) vector) and transforms.
CorrelatorCurves density_correlator(const std::vector<std::vector<double>>& snapshots);

// One g(q) curve of the weak-localization analysis.
struct GCurve {
  double gamma = 0.0;
  double g0 = 0.0;
  double ell0 = 0.0;
  std::vector<double> q;
  std::vector<double> g;
};

struct WeakLocalizationResult {
  // Reference crossover g/g0 = (1 + (b x)^p)^(-1/p), x = q ell0.
  double ref_b = 0.0;
  double ref_p = 0.0;
  double collapse_residual = 0.0;  // rms relative misfit in the fit window
  std::vector<std::vector<double>> x;  // per curve: q ell0
  std::vector<std::vector<double>> delta_g;  // per curve
  // Pooled regression of -delta_g against ln(1/(q ell0)) on the slope window.
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  int n_points = 0;
};

struct WeakLocalizationOptions {
  double fit_lo = 0.5;
  double fit_hi = 3.0;
  double slope_lo = 0.0;  // q ell0 window for the slope regression
  double slope_hi = 0.5;
  double max_residual = 0.2;
};

// Throws NumericalFailure when the reference fit misses the collapsed data
// by more than options.max_residual.
WeakLocalizationResult weak_localization_delta(const std::vector<GCurve>& curves,
                                               const WeakLocalizationOptions& options = {});

double wl_reference(double x, double b, double p);

// Stable observable identifiers: S1, S2, SN:<N>, C2, C4, covG, mutinfo,
// Cx, Cq, gq.
struct ObservableId {
  enum class Kind { S, C2, C4, CovG, MutInfo, Cx, Cq, Gq };
  Kind kind = Kind::S;
  int renyi = 1;

  static ObservableId parse(const std::string& id);  // throws InvalidArgument
  std::string str() const;
};

// A fixed list of (observable, region) columns evaluated at every probe.
class ProbePlan {
 public:
  struct Column {
    std::string observable;
    std::string region;
  };

  ProbePlan(const ModelParams& params, const std::vector<ObservableId>& ids);

  const std::vector<Column>& columns() const { return columns_; }
  bool wants_correlator() const { return wants_cx_; }
  std::vector<double> evaluate(const CorrelationMatrix& D) const;

 private:
  int L_;
  std::vector<ObservableId> ids_;
  std::vector<Column> columns_;
  bool wants_cx_ = false;
};

}  // namespace monferm
