#pragma once
// Measurement schedules, the warm-up / sampling protocol, and ensemble
// reduction with bootstrap errors.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monferm/trajectory.hpp"

namespace monferm {

// Times are given in units of 1/gamma.
struct ProtocolConfig {
  double warmup = 25.0;
  double obs_interval = 5.0;
  double t_max = 100.0;
  int n_traj = 16;
  std::uint64_t master_seed = 1;
  int n_resample = 1000;
  bool random_initial_state = true;  // otherwise evenly spaced occupations
  TrajectoryOptions trajectory;

  void validate() const;
  double warmup_time(double gamma) const { return warmup / gamma; }
  double obs_interval_time(double gamma) const { return obs_interval / gamma; }
  double t_max_time(double gamma) const { return t_max / gamma; }
  // warmup + k * obs_interval up to t_max.
  std::vector<double> probe_times(double gamma) const;
};

// Merged Poisson process of rate L*gamma with uniform site labels on [0, T].
Schedule sample_schedule(CounterRng& rng, int L, double gamma, double T);

// N occupied sites chosen uniformly at random.
std::vector<int> random_occupations(CounterRng& rng, int L, int N);
// N sites spread evenly (alternating at half filling).
std::vector<int> spread_occupations(int L, int N);

struct BootstrapResult {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Resamples with replacement; stderr is the spread of resampled means.
BootstrapResult bootstrap(std::span<const double> samples, int n_resample, CounterRng rng);

double compensated_mean(std::span<const double> samples);

struct SummaryRow {
  std::string observable;
  std::string region;
  std::optional<double> t;  // empty: pooled over all post-warmup probes
  double mean = 0.0;
  double stderr_ = 0.0;
  int n_traj = 0;
  int n_time_samples = 0;
};

struct EnsembleSummary {
  ModelParams params;
  ProtocolConfig protocol;
  std::vector<SummaryRow> rows;
};

struct EnsembleHooks {
  int workers = 1;
  // Called from the reducer thread, in trajectory index order.
  std::function<void(int index, const TrajectoryRecord&)> on_record;
};

// Seeds of trajectory i derive from split(master_seed, i) only, so the
// result does not depend on the worker count or completion order.
EnsembleSummary run_ensemble(const ModelParams& params, const ProtocolConfig& protocol,
                             const std::vector<ObservableId>& observables, const EnsembleHooks& hooks = {});

// Inputs of trajectory i, derived from split(master_seed, i).
struct MemberInputs {
  std::vector<int> occupations;
  Schedule schedule;
  std::vector<double> probes;
  CounterRng outcome_rng{0};
};
MemberInputs member_inputs(const ModelParams& params, const ProtocolConfig& protocol, int index);

// Runs trajectory i of an ensemble exactly as run_ensemble would.
TrajectoryRecord run_member(const ModelParams& params, const ProtocolConfig& protocol, const ProbePlan* plan,
                            int index);

// Worker count from MONFERM_WORKERS, else 1.
int default_workers();

}  // namespace monferm
