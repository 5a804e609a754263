// monferm: trajectory ensembles, analytic flows and oracle checks.
//
// Exit codes: 0 success, 1 oracle-check tolerance breach or internal
// error, 2 invalid arguments or configuration, 3 trajectory abort,
// 4 numerical failure in the analytics.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "monferm/config.hpp"
#include "monferm/errors.hpp"
#include "monferm/kink.hpp"
#include "monferm/oracle.hpp"
#include "monferm/output.hpp"
#include "monferm/phase_boundary.hpp"
#include "monferm/rg_flow.hpp"
#include "monferm/yhf.hpp"

namespace fs = std::filesystem;
using namespace monferm;

namespace {

void kv(const std::string& key, double v) { std::cout << key << " = " << format_double(v) << '\n'; }
void kv(const std::string& key, const std::string& v) { std::cout << key << " = " << v << '\n'; }

// Writes through a temporary file so a failed run leaves nothing behind.
class AtomicFile {
 public:
  explicit AtomicFile(fs::path target) : target_(std::move(target)), tmp_(target_.string() + ".partial") {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw InvalidArgument("cannot write " + tmp_.string());
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ostream& stream() { return out_; }
  void commit() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed: " + tmp_.string());
    fs::rename(tmp_, target_);
    committed_ = true;
  }

 private:
  fs::path target_, tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_table(const std::string& path, const RunMeta& meta, const std::vector<CsvRecord>& rows,
                 const std::vector<std::string>& comments) {
  if (path.empty()) return;
  AtomicFile f(path);
  write_csv_header(f.stream(), comments);
  for (const auto& r : rows) write_csv_record(f.stream(), meta, r);
  f.commit();
}

RunMeta analytics_meta(const std::string& run_id) {
  RunMeta m;
  m.run_id = run_id;
  m.engine = "analytics";
  return m;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> sets;
  bool overwrite = false;
  bool snapshots = false;
  int workers = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  RunConfig cfg = a.config_path.empty() ? RunConfig{} : load_config(a.config_path);
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got " + s);
    set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : a.overrides) set_config_value(cfg, k, v);
  cfg.protocol.trajectory.record_events = cfg.write_events;
  cfg.protocol.trajectory.record_correlator = a.snapshots;
  if (a.snapshots && cfg.params.boundary != Boundary::Periodic)
    throw InvalidArgument("--snapshots requires periodic boundaries");
  cfg.validate();

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const fs::path summary = dir / (cfg.run_id + "." + cfg.format);
  const fs::path events = dir / (cfg.run_id + ".events.jsonl");
  const fs::path snaps = dir / (cfg.run_id + ".cx.jsonl");
  const fs::path cfg_out = dir / (cfg.run_id + ".cfg");
  for (const auto& p : {summary, events, snaps, cfg_out})
    if (fs::exists(p) && !a.overwrite)
      throw InvalidArgument("run_id " + cfg.run_id + " already exists in " + dir.string() + " (use --overwrite)");

  RunMeta meta;
  meta.run_id = cfg.run_id;
  meta.engine = to_string(cfg.engine());
  meta.params = cfg.params;
  meta.seed = cfg.protocol.master_seed;

  std::vector<TrajectoryRecord> kept;
  EnsembleHooks hooks;
  hooks.workers = a.workers > 0 ? a.workers : default_workers();
  if (cfg.write_events || a.snapshots) {
    kept.resize(cfg.protocol.n_traj);
    hooks.on_record = [&](int i, const TrajectoryRecord& r) { kept[i] = r; };
  }
  const EnsembleSummary s = run_ensemble(cfg.params, cfg.protocol, cfg.observables, hooks);

  {
    AtomicFile f(summary);
    write_summary(f.stream(), meta, s, cfg.format);
    f.commit();
  }
  {
    AtomicFile f(cfg_out);
    f.stream() << to_config_text(cfg);
    f.commit();
  }
  if (cfg.write_events) {
    AtomicFile f(events);
    for (int i = 0; i < cfg.protocol.n_traj; ++i) write_events_jsonl(f.stream(), cfg.run_id, i, kept[i]);
    f.commit();
  }
  if (a.snapshots) {
    AtomicFile f(snaps);
    for (int i = 0; i < cfg.protocol.n_traj; ++i) write_correlator_jsonl(f.stream(), meta, i, kept[i]);
    f.commit();
  }
  kv("summary", summary.string());
  return 0;
}

// ---------------------------------------------------------------------- rg

struct RgArgs {
  std::string mode = "free";
  double G0 = 1.0, eps = 0.0, ell0 = 1.0, G_stop = 1.0, R = 1.0, u0 = 0.0;
  std::string cls = "AIII";
  int d = 1;
  std::string out;
};

int cmd_rg(const RgArgs& a) {
  std::vector<CsvRecord> rows;
  std::vector<std::string> comments;
  if (a.mode == "free") {
    SymmetryClass c;
    if (a.cls == "AIII") c = SymmetryClass::AIII;
    else if (a.cls == "BDI") c = SymmetryClass::BDI;
    else throw InvalidArgument("--class must be AIII or BDI");
    const FreeFlowResult r = flow_free(a.G0, c, a.eps, a.ell0, a.G_stop, a.R);
    for (const auto& p : r.curve) rows.push_back({"G", "ln_ell", p.ln_ell, p.a, 0.0, 0});
    kv("ell_loc", r.ell_loc);
    comments.push_back("free flow, class " + a.cls + ", ell_loc = " + format_double(r.ell_loc));
  } else if (a.mode == "interacting") {
    const InteractingFlowResult r = flow_interacting(a.G0, a.u0, a.d, a.ell0, a.G_stop);
    for (const auto& p : r.curve) {
      rows.push_back({"G", "ln_ell", p.ln_ell, p.a, 0.0, 0});
      rows.push_back({"u", "ln_ell", p.ln_ell, p.b, 0.0, 0});
    }
    kv("outcome", to_string(r.outcome));
    kv("ell_star", r.ell_star);
    comments.push_back("interacting flow, outcome " + to_string(r.outcome) + ", ell_star = " + format_double(r.ell_star));
  } else {
    throw InvalidArgument("--mode must be free or interacting");
  }
  write_table(a.out, analytics_meta("rg"), rows, comments);
  return 0;
}

// --------------------------------------------------------------------- bkt

struct BktArgs {
  double g0 = 1.0, kappa0 = 0.0;
  BktOptions opt;
  std::string out;
};

int cmd_bkt(const BktArgs& a) {
  const BktResult r = flow_bkt(a.g0, a.kappa0, a.opt);
  kv("side", to_string(r.side));
  kv("c", r.c);
  kv("separatrix", bkt_separatrix_value());
  if (r.g_infinity) kv("g_infinity", *r.g_infinity);
  if (r.ell_C) kv("ell_C", *r.ell_C);
  kv("max_c_drift", r.max_c_drift);
  std::vector<CsvRecord> rows;
  for (const auto& p : r.curve) {
    rows.push_back({"g", "ln_ell", p.ln_ell, p.a, 0.0, 0});
    rows.push_back({"kappa", "ln_ell", p.ln_ell, p.b, 0.0, 0});
  }
  write_table(a.out, analytics_meta("bkt"), rows, {"BKT flow, side " + to_string(r.side) + ", c = " + format_double(r.c)});
  return 0;
}

// --------------------------------------------------------------------- yhf

struct YhfArgs {
  std::vector<double> z{0.05};
  int d = 1;
  double V = 1.0, J = 1.0;
  std::string out;
};

int cmd_yhf(const YhfArgs& a) {
  if (!(a.J > 0.0)) throw InvalidArgument("--J must be > 0");
  YhfIntegrator integ(a.d);
  std::vector<CsvRecord> rows;
  for (double z : a.z) {
    if (!(z > 0.0 && z <= 1.0)) throw InvalidArgument("--z must lie in (0, 1]");
    const double red = integ.reduced(z);
    const double Y = a.V * a.V / a.J * red;
    rows.push_back({"Y_HF", "z", z, Y, 0.0, 0});
    std::cout << "z = " << format_double(z) << "  Y_HF = " << format_double(Y) << '\n';
  }
  kv("tau_switch", integ.tau_switch());
  kv("tail_matched", integ.matched() ? "true" : "false");
  RunMeta m = analytics_meta("yhf");
  m.params.gamma = 0.0;  // varies per row as z * J
  m.params.V = a.V;
  m.params.J1 = a.J;
  write_table(a.out, m, rows, {"d = " + std::to_string(a.d) + ", tau_switch = " + format_double(integ.tau_switch())});
  return 0;
}

// -------------------------------------------------------------------- kink

struct KinkArgs {
  double m = 1.0, g = 1.0;
  int N = 2;
  KinkOptions opt;
  std::string out;
};

int cmd_kink(const KinkArgs& a) {
  const KinkResult r = sine_gordon_kink(a.m, a.g, a.N, a.opt);
  kv("energy", r.energy);
  kv("action_per_area", r.action_per_area);
  kv("entropy_density", r.entropy_density);
  kv("residual", r.residual);
  if (!a.out.empty()) {
    AtomicFile f(a.out);
    write_profile_csv(f.stream(), r.y, r.phi);
    f.commit();
  }
  return 0;
}

// ----------------------------------------------------------- phase-diagram

struct PhaseArgs {
  double gamma_min = 0.05, gamma_max = 0.2;
  int n_gamma = 16;
  double n0 = 0.5, J1 = 1.0;
  double fit_lo = 0.05, fit_hi = 0.2;
  PhaseBoundaryOptions opt;
  std::string out;
};

int cmd_phase(const PhaseArgs& a) {
  if (a.n_gamma < 2 || !(a.gamma_min > 0.0) || !(a.gamma_max > a.gamma_min))
    throw InvalidArgument("need n_gamma >= 2 and 0 < gamma_min < gamma_max");
  std::vector<double> grid;
  for (int i = 0; i < a.n_gamma; ++i)
    grid.push_back(a.gamma_min * std::pow(a.gamma_max / a.gamma_min, static_cast<double>(i) / (a.n_gamma - 1)));
  ModelParams templ;
  templ.L = 2;
  templ.n0 = a.n0;
  templ.J1 = a.J1;
  const auto pts = phase_boundary(grid, templ, a.opt);
  std::vector<CsvRecord> rows;
  std::string missing;
  for (const auto& p : pts) {
    if (p.V_c) rows.push_back({"V_c", "gamma", p.gamma, *p.V_c, 0.0, 0});
    else missing += (missing.empty() ? "" : ",") + format_double(p.gamma);
    rows.push_back({"ell_loc", "gamma", p.gamma, p.ell_loc, 0.0, 0});
  }
  if (!missing.empty()) kv("no_crossing", missing);
  const BoundaryFit fit = fit_boundary(pts, a.fit_lo, a.fit_hi);
  kv("slope", fit.slope);
  kv("slope_target", -std::sqrt(2.0) * std::numbers::pi);
  RunMeta m = analytics_meta("phase-diagram");
  m.params.n0 = a.n0;
  m.params.J1 = a.J1;
  write_table(a.out, m, rows,
              {"ell_loc prefactor " + format_double(a.opt.ell_loc_prefactor) + ", ell_int prefactor " +
               format_double(a.opt.ell_int_prefactor) + ", fit slope " + format_double(fit.slope)});
  return 0;
}

// -------------------------------------------------------------- correlator

struct CorrelatorArgs {
  std::vector<std::string> inputs;
  int n_resample = 1000;
  WeakLocalizationOptions wl;
  std::string out;
};

int cmd_correlator(const CorrelatorArgs& a) {
  std::vector<GCurve> curves;
  std::vector<CsvRecord> rows;
  std::vector<RunMeta> metas;
  std::vector<std::vector<double>> errs;
  for (const auto& path : a.inputs) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    const CorrelatorSnapshots s = read_correlator_jsonl(in);
    if (s.meta.params.boundary != Boundary::Periodic) throw InvalidArgument(path + ": run used open boundaries");
    const int L = s.meta.params.L;
    // Per-trajectory averages, so errors resample whole trajectories.
    std::map<int, std::pair<std::vector<double>, int>> per_traj;
    for (std::size_t k = 0; k < s.cx.size(); ++k) {
      auto& [acc, n] = per_traj[s.traj[k]];
      acc.resize(L, 0.0);
      for (int x = 0; x < L; ++x) acc[x] += s.cx[k][x];
      ++n;
    }
    std::vector<std::vector<double>> traj_g;
    for (auto& [t, pr] : per_traj) {
      for (double& v : pr.first) v /= pr.second;
      traj_g.push_back(correlator_from_cx(pr.first).gq);
    }
    const CorrelatorCurves all = density_correlator(s.cx);
    const CharacteristicScales sc = characteristic_scales(s.meta.params);
    GCurve c{s.meta.params.gamma, sc.g0, sc.ell0, {}, {}};
    std::vector<double> e;
    CounterRng boot = CounterRng(s.meta.seed).split(stream::kBootstrap);
    for (std::size_t k = 1; k < all.q.size(); ++k) {
      std::vector<double> samples;
      for (const auto& g : traj_g) samples.push_back(g[k]);
      const BootstrapResult b = bootstrap(samples, a.n_resample, boot.split(k));
      c.q.push_back(all.q[k]);
      c.g.push_back(all.gq[k]);
      e.push_back(b.stderr_);
    }
    curves.push_back(c);
    metas.push_back(s.meta);
    errs.push_back(e);
  }
  std::optional<WeakLocalizationResult> wl;
  if (curves.size() >= 2) wl = weak_localization_delta(curves, a.wl);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    for (std::size_t k = 0; k < c.q.size(); ++k) {
      const int n = static_cast<int>(errs[i].size());
      rows.push_back({"gq", "q_ell0", c.q[k] * c.ell0, c.g[k], errs[i][k], n});
      if (wl) rows.push_back({"delta_g", "q_ell0", c.q[k] * c.ell0, wl->delta_g[i][k], errs[i][k], n});
    }
  }
  std::vector<std::string> comments;
  if (wl) {
    kv("slope", wl->slope);
    kv("slope_stderr", wl->slope_stderr);
    kv("reference_b", wl->ref_b);
    kv("reference_p", wl->ref_p);
    kv("collapse_residual", wl->collapse_residual);
    comments.push_back("weak-localization slope " + format_double(wl->slope) + " +- " + format_double(wl->slope_stderr));
  }
  if (!a.out.empty()) {
    AtomicFile f(a.out);
    write_csv_header(f.stream(), comments);
    std::size_t r = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const std::size_t per = curves[i].q.size() * (wl ? 2 : 1);
      RunMeta m = metas[i];
      m.engine = "correlator";
      for (std::size_t k = 0; k < per; ++k) write_csv_record(f.stream(), m, rows[r++]);
    }
    f.commit();
  }
  return 0;
}

// ------------------------------------------------------------ oracle-check

int cmd_oracle(const OracleCheckConfig& c) {
  const OracleCheckReport r = oracle_check(c);
  kv("probes", std::to_string(r.probes));
  kv("max_dS", r.max_dS);
  kv("max_dC2", r.max_dC2);
  kv("max_dG", r.max_dG);
  kv("max_dD", r.max_dD);
  kv("max_dp", r.max_dp);
  if (r.interacting) {
    kv("hf_error_slope", r.hf_error_slope);
    kv("oracle_energy_drift", r.oracle_energy_drift);
  }
  for (const auto& f : r.failures) std::cout << "FAIL " << f << '\n';
  std::cout << (r.passed ? "PASS" : "FAIL") << '\n';
  return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monitored lattice fermions: trajectories, analytics and oracle checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("monferm ") + build_id());

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a trajectory ensemble and write its summary");
  s->add_option("-c,--config", sim.config_path, "key = value configuration file");
  s->add_option("--set", sim.sets, "Override one configuration key (key=value), repeatable");
  for (const auto& key : config_keys())
    s->add_option_function<std::string>("--" + key, [&sim, key](const std::string& v) { sim.overrides[key] = v; },
                                        "Override configuration key " + key);
  s->add_flag("--overwrite", sim.overwrite, "Replace an existing run with the same run_id");
  s->add_flag("--snapshots", sim.snapshots, "Write per-probe C_traj(x) snapshots (periodic chains)");
  s->add_option("--workers", sim.workers, "Worker threads (default: MONFERM_WORKERS or 1)");
  s->footer(
      "V couples each unordered nearest-neighbour pair once: H_int = V sum_x n_x n_{x+1}.\n"
      "Times in the protocol keys (warmup, obs_interval, t_max) are in units of 1/gamma.");

  RgArgs rg;
  auto* r = app.add_subcommand("rg", "Integrate the one-loop coupling flow");
  r->add_option("--mode", rg.mode, "free | interacting")->capture_default_str();
  r->add_option("--G0", rg.G0, "Bare coupling")->capture_default_str();
  r->add_option("--class", rg.cls, "AIII | BDI (free mode)")->capture_default_str();
  r->add_option("--eps", rg.eps, "d - 1 (free mode)")->capture_default_str();
  r->add_option("--ell0", rg.ell0, "Starting length scale")->capture_default_str();
  r->add_option("--G-stop", rg.G_stop, "Coupling that defines the stopping scale")->capture_default_str();
  r->add_option("--R", rg.R, "Replica number (free mode)")->capture_default_str();
  r->add_option("--u0", rg.u0, "Bare dimensionless mass (interacting mode)")->capture_default_str();
  r->add_option("--d", rg.d, "Dimension (interacting mode)")->capture_default_str();
  r->add_option("-o,--out", rg.out, "Curve CSV");

  BktArgs bkt;
  auto* b = app.add_subcommand("bkt", "Integrate the BKT flow of (g, kappa)");
  b->add_option("--g0", bkt.g0)->required();
  b->add_option("--kappa0", bkt.kappa0)->required();
  b->add_option("--span", bkt.opt.ln_ell_span, "e-folds of ell to integrate")->capture_default_str();
  b->add_option("--kappa-stop", bkt.opt.kappa_stop, "kappa defining ell_C")->capture_default_str();
  b->add_option("--separatrix-tol", bkt.opt.separatrix_tol)->capture_default_str();
  b->add_option("-o,--out", bkt.out, "Curve CSV");

  YhfArgs yh;
  auto* y = app.add_subcommand("yhf", "Hartree-Fock mass integral Y_HF");
  y->add_option("--z", yh.z, "gamma / J, repeatable")->capture_default_str();
  y->add_option("--d", yh.d)->capture_default_str();
  y->add_option("--V", yh.V)->capture_default_str();
  y->add_option("--J", yh.J)->capture_default_str();
  y->add_option("-o,--out", yh.out, "Table CSV");

  KinkArgs kk;
  auto* k = app.add_subcommand("kink", "Sine-Gordon kink profile and action");
  k->add_option("--m", kk.m)->capture_default_str();
  k->add_option("--g", kk.g)->capture_default_str();
  k->add_option("--N", kk.N)->capture_default_str();
  k->add_option("--y-max", kk.opt.y_max, "Domain length (default 40/m)");
  k->add_option("--points", kk.opt.points, "Grid intervals (default from m)");
  k->add_option("--tol", kk.opt.tol)->capture_default_str();
  k->add_option("-o,--out", kk.out, "Two-column profile CSV");

  PhaseArgs ph;
  auto* p = app.add_subcommand("phase-diagram", "Boundary V_c(gamma) from ell_int = ell_loc");
  p->add_option("--gamma-min", ph.gamma_min)->capture_default_str();
  p->add_option("--gamma-max", ph.gamma_max)->capture_default_str();
  p->add_option("--n-gamma", ph.n_gamma)->capture_default_str();
  p->add_option("--n0", ph.n0)->capture_default_str();
  p->add_option("--J1", ph.J1)->capture_default_str();
  p->add_option("--ell-loc-prefactor", ph.opt.ell_loc_prefactor)->capture_default_str();
  p->add_option("--ell-int-prefactor", ph.opt.ell_int_prefactor)->capture_default_str();
  p->add_option("--G-stop", ph.opt.G_stop)->capture_default_str();
  p->add_option("--fit-lo", ph.fit_lo)->capture_default_str();
  p->add_option("--fit-hi", ph.fit_hi)->capture_default_str();
  p->add_option("-o,--out", ph.out, "Table CSV");

  CorrelatorArgs co;
  auto* c = app.add_subcommand("correlator", "g(q) and weak-localization correction from stored snapshots");
  c->add_option("inputs", co.inputs, "Snapshot files (*.cx.jsonl), one per gamma")->required();
  c->add_option("--n-resample", co.n_resample)->capture_default_str();
  c->add_option("--fit-lo", co.wl.fit_lo)->capture_default_str();
  c->add_option("--fit-hi", co.wl.fit_hi)->capture_default_str();
  c->add_option("--slope-hi", co.wl.slope_hi)->capture_default_str();
  c->add_option("-o,--out", co.out, "Table CSV");

  OracleCheckConfig oc;
  auto* o = app.add_subcommand("oracle-check", "Compare the engines with exact many-body evolution");
  o->add_option("--L", oc.L)->capture_default_str();
  o->add_option("--gamma", oc.gamma)->capture_default_str();
  o->add_option("--V", oc.V, "Interaction for the TDHF checks (0 skips them)")->capture_default_str();
  o->add_option("--seed", oc.seed)->capture_default_str();
  o->add_option("--n-traj", oc.n_traj)->capture_default_str();
  o->add_option("--t-max", oc.t_max, "Units of 1/gamma")->capture_default_str();
  o->add_option("--tolerance", oc.tolerance)->capture_default_str();
  o->add_flag("--inject-fock-sign-flip", oc.flip_fock_sign)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*r) return cmd_rg(rg);
    if (*b) return cmd_bkt(bkt);
    if (*y) return cmd_yhf(yh);
    if (*k) return cmd_kink(kk);
    if (*p) return cmd_phase(ph);
    if (*c) return cmd_correlator(co);
    if (*o) return cmd_oracle(oc);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const TrajectoryAbort& e) {
    std::cerr << "trajectory aborted: " << e.what() << '\n';
    return 3;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
