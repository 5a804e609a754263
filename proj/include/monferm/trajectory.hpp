#pragma once
// One quantum trajectory: unitary (or TDHF) evolution between scheduled
// measurements, observables sampled at probe times.

#include <functional>
#include <vector>

#include "monferm/observables.hpp"
#include "monferm/rng.hpp"
#include "monferm/tdhf_engine.hpp"

namespace monferm {

struct ScheduledMeasurement {
  double t = 0.0;
  int site = 0;
};

using Schedule = std::vector<ScheduledMeasurement>;

enum class Engine { Gaussian, Tdhf };
enum class Representation { Dense, Orbital };

std::string to_string(Engine e);
Engine parse_engine(const std::string& s);
std::string to_string(Representation r);
Representation parse_representation(const std::string& s);

struct TrajectoryOptions {
  Engine engine = Engine::Gaussian;
  Representation representation = Representation::Orbital;
  TdhfOptions tdhf;
  bool record_events = false;
  bool record_correlator = false;  // keep C_traj(x) per probe
  // Replays a recorded outcome sequence instead of drawing from the RNG.
  const std::vector<Outcome>* forced_outcomes = nullptr;
  // Called at every probe with the current state.
  std::function<void(double t, const CorrelationMatrix& D)> on_probe;
};

struct TrajectoryRecord {
  std::vector<MeasurementEvent> events;
  std::vector<double> probe_times;
  std::vector<std::vector<double>> values;  // [probe][plan column]
  std::vector<std::vector<double>> correlator;  // [probe][x]
};

// Measurements at the same time as a probe are applied before it.
// outcome_rng supplies one uniform per measurement.
TrajectoryRecord run_trajectory(const ModelParams& params, const std::vector<int>& initial_occupations,
                                const Schedule& schedule, const std::vector<double>& probes, CounterRng outcome_rng,
                                const ProbePlan* plan, const TrajectoryOptions& options = {});

}  // namespace monferm
