#include "monferm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "monferm/bernoulli_cumulants.hpp"
#include "monferm/errors.hpp"
#include "monferm/summation.hpp"

namespace monferm {

namespace {

constexpr double kEigFloor = 1e-12;
constexpr double kClampSlack = 1e-9;

double poly_eval(const std::array<double, 9>& c, double p) {
  double acc = 0.0;
  for (int j = 8; j >= 0; --j) acc = acc * p + c[j];
  return acc;
}

}  // namespace

Region Region::range(int begin, int end) {
  Region r;
  for (int i = begin; i < end; ++i) r.sites.push_back(i);
  return r;
}

Region Region::half_cut(int L) { return range(0, L / 2); }
Region Region::third_B(int L) { return range(0, L / 3); }
Region Region::third_C(int L) { return range(L - L / 3, L); }

Region Region::united(const Region& other) const {
  Region r;
  std::set_union(sites.begin(), sites.end(), other.sites.begin(), other.sites.end(), std::back_inserter(r.sites));
  return r;
}

bool Region::disjoint(const Region& other) const {
  std::vector<int> common;
  std::set_intersection(sites.begin(), sites.end(), other.sites.begin(), other.sites.end(),
                        std::back_inserter(common));
  return common.empty();
}

void Region::validate(int L) const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 0 || sites[i] >= L) throw InvalidArgument("region index out of range");
    if (i > 0 && sites[i] <= sites[i - 1]) throw InvalidArgument("region indices must be sorted and unique");
  }
}

Eigen::VectorXd region_spectrum(const CorrelationMatrix& D, const Region& A) {
  A.validate(static_cast<int>(D.rows()));
  if (A.sites.empty()) return {};
  const CMatrix DA = D(A.sites, A.sites);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (DA + DA.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::VectorXd lam = es.eigenvalues();
  for (double& l : lam) {
    if (l < -kClampSlack || l > 1.0 + kClampSlack) {
      std::ostringstream msg;
      msg << "correlation eigenvalue " << l << " outside [0, 1]";
      throw TrajectoryAbort(msg.str());
    }
    l = std::clamp(l, 0.0, 1.0);
  }
  return lam;
}

double entropy_from_spectrum(const Eigen::VectorXd& lambdas, int N) {
  if (N < 1) throw InvalidArgument("Renyi index must be >= 1");
  double s = 0.0;
  for (double l : lambdas) {
    if (l < kEigFloor || l > 1.0 - kEigFloor) continue;
    if (N == 1)
      s -= l * std::log(l) + (1.0 - l) * std::log1p(-l);
    else
      s += std::log(std::pow(l, N) + std::pow(1.0 - l, N));
  }
  return N == 1 ? s : s / (1.0 - N);
}

std::vector<double> cumulants_from_spectrum(const Eigen::VectorXd& lambdas, int max_order) {
  if (max_order < 2 || max_order > 8 || max_order % 2 != 0)
    throw InvalidArgument("cumulant order must be even and in [2, 8]");
  std::vector<double> out;
  for (int q = 0; 2 * (q + 1) <= max_order; ++q) {
    double s = 0.0;
    for (double l : lambdas) s += poly_eval(detail::kBernoulliCumulants[q], l);
    out.push_back(s);
  }
  return out;
}

double entanglement_entropy(const CorrelationMatrix& D, const Region& A, int N) {
  if (N < 1) throw InvalidArgument("Renyi index must be >= 1");
  return entropy_from_spectrum(region_spectrum(D, A), N);
}

std::vector<double> charge_cumulants(const CorrelationMatrix& D, const Region& A, int max_order) {
  if (max_order < 2 || max_order > 8 || max_order % 2 != 0)
    throw InvalidArgument("cumulant order must be even and in [2, 8]");
  return cumulants_from_spectrum(region_spectrum(D, A), max_order);
}

std::vector<cplx> fcs_log_generating(const CorrelationMatrix& D, const Region& A, std::span<const double> grid) {
  const Eigen::VectorXd lam = region_spectrum(D, A);
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const cplx e = std::polar(1.0, t);
    cplx s = 0.0;
    for (double l : lam) s += std::log(1.0 - l + l * e);
    out.push_back(s);
  }
  return out;
}

double covariance_G(const CorrelationMatrix& D, const Region& B, const Region& C) {
  B.validate(static_cast<int>(D.rows()));
  C.validate(static_cast<int>(D.rows()));
  if (!B.disjoint(C)) throw InvalidArgument("covariance_G: regions overlap");
  double s = 0.0;
  for (int i : B.sites)
    for (int j : C.sites) s += std::norm(D(i, j));
  return s;
}

double mutual_information(const CorrelationMatrix& D, const Region& B, const Region& C) {
  if (!B.disjoint(C)) throw InvalidArgument("mutual_information: regions overlap");
  return entanglement_entropy(D, B) + entanglement_entropy(D, C) - entanglement_entropy(D, B.united(C));
}

double klich_levitov_sum(const CorrelationMatrix& D, const Region& A, int q_max) {
  if (q_max < 1 || q_max > 4) throw InvalidArgument("klich_levitov_sum: q_max must be in [1, 4]");
  const std::vector<double> c = charge_cumulants(D, A, 2 * q_max);
  double s = 0.0;
  for (int q = 1; q <= q_max; ++q) s += 2.0 * std::riemann_zeta(2.0 * q) * c[q - 1];
  return s;
}

std::vector<double> density_correlator_snapshot(const CorrelationMatrix& D) {
  const int L = static_cast<int>(D.rows());
  std::vector<double> c(L, 0.0);
  for (int x0 = 0; x0 < L; ++x0) {
    const double n = D(x0, x0).real();
    c[0] += n * (1.0 - n);
    for (int x = 1; x < L; ++x) c[x] -= std::norm(D((x0 + x) % L, x0));
  }
  for (double& v : c) v /= L;
  return c;
}

CorrelatorCurves correlator_from_cx(const std::vector<double>& Cx) {
  const int L = static_cast<int>(Cx.size());
  CorrelatorCurves out;
  out.Cx = Cx;
  for (int k = 0; k <= L / 2; ++k) {
    const double q = 2.0 * std::numbers::pi * k / L;
    // C(x) = C(L - x), so the transform is real.
    double s = 0.0;
    for (int x = 0; x < L; ++x) s += Cx[x] * std::cos(q * x);
    out.q.push_back(q);
    out.Cq.push_back(s);
    out.gq.push_back(k == 0 ? 0.0 : s / q);
  }
  return out;
}

CorrelatorCurves density_correlator(const std::vector<std::vector<double>>& snapshots) {
  if (snapshots.empty()) throw InvalidArgument("density_correlator: no snapshots");
  const std::size_t L = snapshots.front().size();
  std::vector<CompensatedSum> acc(L);
  for (const auto& s : snapshots) {
    if (s.size() != L) throw InvalidArgument("density_correlator: snapshot length mismatch");
    for (std::size_t x = 0; x < L; ++x) acc[x].add(s[x]);
  }
  std::vector<double> mean(L);
  for (std::size_t x = 0; x < L; ++x) mean[x] = acc[x].value() / snapshots.size();
  return correlator_from_cx(mean);
}

double wl_reference(double x, double b, double p) { return std::pow(1.0 + std::pow(b * x, p), -1.0 / p); }

namespace {

// Functor shape expected by Eigen's NumericalDiff / LevenbergMarquardt.
struct RefFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<double>& xs;
  const std::vector<double>& ys;
  RefFunctor(const std::vector<double>& x, const std::vector<double>& y) : xs(x), ys(y) {}
  int inputs() const { return 2; }
  int values() const { return static_cast<int>(xs.size()); }

  // theta = (ln b, ln p); residuals are relative misfits.
  int operator()(const InputType& th, ValueType& r) const {
    const double b = std::exp(th(0)), p = std::exp(th(1));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = wl_reference(xs[i], b, p);
      r(static_cast<Eigen::Index>(i)) = (ys[i] - f) / f;
    }
    return 0;
  }
};

}  // namespace

WeakLocalizationResult weak_localization_delta(const std::vector<GCurve>& curves, const WeakLocalizationOptions& o) {
  if (curves.size() < 2) throw InvalidArgument("weak_localization_delta: need curves for >= 2 values of gamma");
  std::vector<double> fx, fy;
  for (const auto& c : curves) {
    if (c.q.size() != c.g.size()) throw InvalidArgument("weak_localization_delta: q/g length mismatch");
    if (!(c.g0 > 0.0) || !(c.ell0 > 0.0)) throw InvalidArgument("weak_localization_delta: g0, ell0 must be > 0");
    for (std::size_t i = 0; i < c.q.size(); ++i) {
      const double x = c.q[i] * c.ell0;
      if (c.q[i] > 0.0 && x >= o.fit_lo && x <= o.fit_hi) {
        fx.push_back(x);
        fy.push_back(c.g[i] / c.g0);
      }
    }
  }
  if (fx.size() < 3) throw NumericalFailure("weak_localization_delta: too few points in the reference fit window");

  RefFunctor functor(fx, fy);
  Eigen::NumericalDiff<RefFunctor> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<RefFunctor>> lm(numdiff);
  Eigen::VectorXd theta(2);
  theta << std::log(2.0), 0.0;
  lm.minimize(theta);

  WeakLocalizationResult res;
  res.ref_b = std::exp(theta(0));
  res.ref_p = std::exp(theta(1));
  Eigen::VectorXd r(fx.size());
  functor(theta, r);
  res.collapse_residual = std::sqrt(r.squaredNorm() / r.size());
  if (!std::isfinite(res.collapse_residual) || res.collapse_residual > o.max_residual) {
    std::ostringstream msg;
    msg << "weak_localization_delta: reference collapse residual " << res.collapse_residual << " exceeds "
        << o.max_residual;
    throw NumericalFailure(msg.str());
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& c : curves) {
    std::vector<double> xs, dg;
    for (std::size_t i = 0; i < c.q.size(); ++i) {
      if (!(c.q[i] > 0.0)) continue;
      const double x = c.q[i] * c.ell0;
      const double d = c.g[i] - c.g0 * wl_reference(x, res.ref_b, res.ref_p);
      xs.push_back(x);
      dg.push_back(d);
      if (x > o.slope_lo && x <= o.slope_hi) pts.emplace_back(std::log(1.0 / x), -d);
    }
    res.x.push_back(std::move(xs));
    res.delta_g.push_back(std::move(dg));
  }
  for (auto [u, v] : pts) {
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
    ++n;
  }
  res.n_points = n;
  if (n >= 3) {
    const double den = n * sxx - sx * sx;
    res.slope = (n * sxy - sx * sy) / den;
    res.intercept = (sy - res.slope * sx) / n;
    double ss = 0.0;
    for (auto [u, v] : pts) ss += std::pow(v - res.intercept - res.slope * u, 2);
    res.slope_stderr = std::sqrt(ss / (n - 2) * n / den);
  }
  return res;
}

ObservableId ObservableId::parse(const std::string& id) {
  ObservableId o;
  if (id == "S1") return o;
  if (id == "S2") {
    o.renyi = 2;
    return o;
  }
  if (id.rfind("SN:", 0) == 0) {
    try {
      std::size_t pos = 0;
      o.renyi = std::stoi(id.substr(3), &pos);
      if (pos != id.size() - 3 || o.renyi < 1) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument("bad Renyi observable '" + id + "'");
    }
    return o;
  }
  if (id == "C2") o.kind = Kind::C2;
  else if (id == "C4") o.kind = Kind::C4;
  else if (id == "covG") o.kind = Kind::CovG;
  else if (id == "mutinfo") o.kind = Kind::MutInfo;
  else if (id == "Cx") o.kind = Kind::Cx;
  else if (id == "Cq") o.kind = Kind::Cq;
  else if (id == "gq") o.kind = Kind::Gq;
  else throw InvalidArgument("unknown observable '" + id + "'");
  return o;
}

std::string ObservableId::str() const {
  switch (kind) {
    case Kind::S:
      return renyi == 1 ? "S1" : renyi == 2 ? "S2" : "SN:" + std::to_string(renyi);
    case Kind::C2:
      return "C2";
    case Kind::C4:
      return "C4";
    case Kind::CovG:
      return "covG";
    case Kind::MutInfo:
      return "mutinfo";
    case Kind::Cx:
      return "Cx";
    case Kind::Cq:
      return "Cq";
    case Kind::Gq:
      return "gq";
  }
  return "?";
}

ProbePlan::ProbePlan(const ModelParams& params, const std::vector<ObservableId>& ids) : L_(params.L), ids_(ids) {
  for (const auto& id : ids_) {
    const std::string name = id.str();
    switch (id.kind) {
      case ObservableId::Kind::S:
      case ObservableId::Kind::C2:
      case ObservableId::Kind::C4:
        columns_.push_back({name, "A"});
        break;
      case ObservableId::Kind::CovG:
      case ObservableId::Kind::MutInfo:
        if (L_ < 3) throw InvalidArgument(name + " needs L >= 3");
        columns_.push_back({name, "BC"});
        break;
      case ObservableId::Kind::Cx:
      case ObservableId::Kind::Cq:
      case ObservableId::Kind::Gq:
        if (params.boundary != Boundary::Periodic)
          throw InvalidArgument(name + " requires periodic boundaries (translation average)");
        wants_cx_ = true;
        if (id.kind == ObservableId::Kind::Cx)
          for (int x = 0; x <= L_ / 2; ++x) columns_.push_back({name, "x=" + std::to_string(x)});
        else
          for (int k = id.kind == ObservableId::Kind::Gq ? 1 : 0; k <= L_ / 2; ++k)
            columns_.push_back({name, "q=" + std::to_string(k)});
        break;
    }
  }
}

std::vector<double> ProbePlan::evaluate(const CorrelationMatrix& D) const {
  std::vector<double> out;
  out.reserve(columns_.size());
  const Region A = Region::half_cut(L_);
  const Region B = Region::third_B(L_), C = Region::third_C(L_);
  Eigen::VectorXd lamA;
  bool have_A = false;
  auto spectrum_A = [&]() -> const Eigen::VectorXd& {
    if (!have_A) {
      lamA = region_spectrum(D, A);
      have_A = true;
    }
    return lamA;
  };
  std::vector<double> cx;
  CorrelatorCurves curves;
  if (wants_cx_) {
    cx = density_correlator_snapshot(D);
    curves = correlator_from_cx(cx);
  }
  for (const auto& id : ids_) {
    switch (id.kind) {
      case ObservableId::Kind::S:
        out.push_back(entropy_from_spectrum(spectrum_A(), id.renyi));
        break;
      case ObservableId::Kind::C2:
        out.push_back(cumulants_from_spectrum(spectrum_A(), 2)[0]);
        break;
      case ObservableId::Kind::C4:
        out.push_back(cumulants_from_spectrum(spectrum_A(), 4)[1]);
        break;
      case ObservableId::Kind::CovG:
        out.push_back(covariance_G(D, B, C));
        break;
      case ObservableId::Kind::MutInfo:
        out.push_back(mutual_information(D, B, C));
        break;
      case ObservableId::Kind::Cx:
        for (int x = 0; x <= L_ / 2; ++x) out.push_back(cx[x]);
        break;
      case ObservableId::Kind::Cq:
        for (double v : curves.Cq) out.push_back(v);
        break;
      case ObservableId::Kind::Gq:
        for (std::size_t k = 1; k < curves.gq.size(); ++k) out.push_back(curves.gq[k]);
        break;
    }
  }
  return out;
}

}  // namespace monferm
