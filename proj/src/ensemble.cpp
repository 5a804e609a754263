#include "monferm/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "monferm/errors.hpp"
#include "monferm/summation.hpp"

namespace monferm {

void ProtocolConfig::validate() const {
  if (!(warmup >= 0.0) || !(obs_interval > 0.0) || !(t_max >= warmup))
    throw InvalidArgument("protocol times must satisfy 0 <= warmup <= t_max and obs_interval > 0");
  if (n_traj < 1) throw InvalidArgument("n_traj must be >= 1");
  if (n_resample < 1) throw InvalidArgument("n_resample must be >= 1");
}

std::vector<double> ProtocolConfig::probe_times(double gamma) const {
  std::vector<double> t;
  const double t0 = warmup_time(gamma), dt = obs_interval_time(gamma), t1 = t_max_time(gamma);
  for (int k = 0;; ++k) {
    const double tk = t0 + k * dt;
    if (tk > t1 * (1.0 + 1e-12)) break;
    t.push_back(tk);
  }
  return t;
}

Schedule sample_schedule(CounterRng& rng, int L, double gamma, double T) {
  if (!(T > 0.0)) throw InvalidArgument("sample_schedule: T must be > 0");
  if (L < 1 || !(gamma >= 0.0)) throw InvalidArgument("sample_schedule: bad L or gamma");
  Schedule s;
  if (gamma == 0.0) return s;
  const double rate = L * gamma;
  s.reserve(static_cast<std::size_t>(rate * T * 1.1) + 16);
  double t = 0.0;
  while (true) {
    t += rng.exponential(rate);
    if (t > T) break;
    s.push_back({t, static_cast<int>(rng.below(static_cast<std::uint64_t>(L)))});
  }
  return s;
}

std::vector<int> random_occupations(CounterRng& rng, int L, int N) {
  if (N < 0 || N > L) throw InvalidArgument("particle number out of range");
  std::vector<int> idx(L);
  for (int i = 0; i < L; ++i) idx[i] = i;
  // Partial Fisher-Yates with the counter-based stream.
  for (int i = 0; i < N; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(L - i)));
    std::swap(idx[i], idx[j]);
  }
  std::vector<int> occ(L, 0);
  for (int i = 0; i < N; ++i) occ[idx[i]] = 1;
  return occ;
}

std::vector<int> spread_occupations(int L, int N) {
  if (N < 0 || N > L) throw InvalidArgument("particle number out of range");
  std::vector<int> occ(L, 0);
  for (int n = 0; n < N; ++n) occ[static_cast<int>(static_cast<long long>(n) * L / N)] = 1;
  return occ;
}

double compensated_mean(std::span<const double> samples) {
  if (samples.empty()) throw InvalidArgument("mean of empty sample");
  CompensatedSum s;
  for (double v : samples) s.add(v);
  return s.value() / static_cast<double>(samples.size());
}

BootstrapResult bootstrap(std::span<const double> samples, int n_resample, CounterRng rng) {
  if (samples.empty()) throw InvalidArgument("bootstrap: empty input");
  if (n_resample < 1) throw InvalidArgument("bootstrap: n_resample must be >= 1");
  BootstrapResult r;
  r.mean = compensated_mean(samples);
  const auto n = samples.size();
  std::vector<double> means(n_resample);
  for (int b = 0; b < n_resample; ++b) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(samples[rng.below(n)]);
    means[b] = s.value() / static_cast<double>(n);
  }
  const double mm = compensated_mean(means);
  CompensatedSum var;
  for (double m : means) var.add((m - mm) * (m - mm));
  r.stderr_ = n_resample > 1 ? std::sqrt(var.value() / (n_resample - 1)) : 0.0;
  return r;
}

MemberInputs member_inputs(const ModelParams& params, const ProtocolConfig& protocol, int index) {
  const CounterRng stream = CounterRng(protocol.master_seed).split(static_cast<std::uint64_t>(index));
  CounterRng init_rng = stream.split(stream::kInitialState);
  CounterRng sched_rng = stream.split(stream::kSchedule);
  const int N = params.particle_number();
  MemberInputs in;
  in.occupations =
      protocol.random_initial_state ? random_occupations(init_rng, params.L, N) : spread_occupations(params.L, N);
  in.schedule = sample_schedule(sched_rng, params.L, params.gamma, protocol.t_max_time(params.gamma));
  in.probes = protocol.probe_times(params.gamma);
  in.outcome_rng = stream.split(stream::kOutcomes);
  return in;
}

TrajectoryRecord run_member(const ModelParams& params, const ProtocolConfig& protocol, const ProbePlan* plan,
                            int index) {
  const MemberInputs in = member_inputs(params, protocol, index);
  return run_trajectory(params, in.occupations, in.schedule, in.probes, in.outcome_rng, plan, protocol.trajectory);
}

int default_workers() {
  if (const char* env = std::getenv("MONFERM_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

EnsembleSummary run_ensemble(const ModelParams& params, const ProtocolConfig& protocol,
                             const std::vector<ObservableId>& observables, const EnsembleHooks& hooks) {
  params.validate();
  protocol.validate();
  const ProbePlan plan(params, observables);
  const int n = protocol.n_traj;
  std::vector<TrajectoryRecord> records(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        records[i] = run_member(params, protocol, &plan, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(hooks.workers, 1, n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (hooks.on_record)
    for (int i = 0; i < n; ++i) hooks.on_record(i, records[i]);

  EnsembleSummary summary{params, protocol, {}};
  const auto& cols = plan.columns();
  const std::vector<double> probes = protocol.probe_times(params.gamma);
  const CounterRng boot_root = CounterRng(protocol.master_seed).split(stream::kBootstrap);
  std::uint64_t row_index = 0;
  std::vector<double> samples(n);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t p = 0; p < probes.size(); ++p) {
      for (int i = 0; i < n; ++i) samples[i] = records[i].values[p][c];
      const BootstrapResult b = bootstrap(samples, protocol.n_resample, boot_root.split(row_index++));
      summary.rows.push_back({cols[c].observable, cols[c].region, probes[p], b.mean, b.stderr_, n, 1});
    }
    // Steady state: time average per trajectory, then across trajectories.
    for (int i = 0; i < n; ++i) {
      CompensatedSum s;
      for (std::size_t p = 0; p < probes.size(); ++p) s.add(records[i].values[p][c]);
      samples[i] = s.value() / static_cast<double>(probes.size());
    }
    const BootstrapResult b = bootstrap(samples, protocol.n_resample, boot_root.split(row_index++));
    summary.rows.push_back(
        {cols[c].observable, cols[c].region, std::nullopt, b.mean, b.stderr_, n, static_cast<int>(probes.size())});
  }
  return summary;
}

}  // namespace monferm
