#include "monferm/trajectory.hpp"

#include <memory>

#include "monferm/errors.hpp"
#include "monferm/gaussian_engine.hpp"

namespace monferm {

std::string to_string(Engine e) { return e == Engine::Gaussian ? "gaussian" : "tdhf"; }

Engine parse_engine(const std::string& s) {
  if (s == "gaussian") return Engine::Gaussian;
  if (s == "tdhf") return Engine::Tdhf;
  throw InvalidArgument("unknown engine '" + s + "' (expected gaussian|tdhf)");
}

std::string to_string(Representation r) { return r == Representation::Dense ? "dense" : "orbital"; }

Representation parse_representation(const std::string& s) {
  if (s == "dense") return Representation::Dense;
  if (s == "orbital") return Representation::Orbital;
  throw InvalidArgument("unknown representation '" + s + "' (expected dense|orbital)");
}

namespace {

template <class State>
TrajectoryRecord drive(State& state, const Schedule& schedule, const std::vector<double>& probes, CounterRng rng,
                       const ProbePlan* plan, const TrajectoryOptions& opt) {
  TrajectoryRecord rec;
  const std::vector<Outcome>* forced = opt.forced_outcomes;
  if (forced && forced->size() < schedule.size()) throw InvalidArgument("forced outcome record shorter than schedule");
  std::size_t next = 0;
  auto apply_until = [&](double t_end) {
    while (next < schedule.size() && schedule[next].t <= t_end) {
      const auto& m = schedule[next];
      state.advance_to(m.t);
      const double u = rng.uniform();
      MeasurementEvent ev = forced ? state.measure(m.site, u, (*forced)[next]) : state.measure(m.site, u);
      if (opt.record_events) rec.events.push_back(ev);
      ++next;
    }
  };
  for (double tp : probes) {
    apply_until(tp);
    state.advance_to(tp);
    state.check("probe");
    const bool need_d = plan || opt.on_probe || opt.record_correlator;
    if (!need_d) continue;
    const CorrelationMatrix D = state.correlation();
    rec.probe_times.push_back(tp);
    if (plan) rec.values.push_back(plan->evaluate(D));
    if (opt.record_correlator) rec.correlator.push_back(density_correlator_snapshot(D));
    if (opt.on_probe) opt.on_probe(tp, D);
  }
  return rec;
}

}  // namespace

TrajectoryRecord run_trajectory(const ModelParams& params, const std::vector<int>& occ, const Schedule& schedule,
                                const std::vector<double>& probes, CounterRng rng, const ProbePlan* plan,
                                const TrajectoryOptions& opt) {
  if (static_cast<int>(occ.size()) != params.L) throw InvalidArgument("initial occupations have wrong length");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i].t < schedule[i - 1].t) throw InvalidArgument("schedule must be sorted by time");
  for (std::size_t i = 1; i < probes.size(); ++i)
    if (probes[i] < probes[i - 1]) throw InvalidArgument("probe times must be sorted");
  for (const auto& m : schedule)
    if (m.site < 0 || m.site >= params.L || m.t < 0.0) throw InvalidArgument("schedule entry out of range");

  const CMatrix h = build_hamiltonian(params);
  if (opt.engine == Engine::Tdhf) {
    auto prop = std::make_shared<const TdhfPropagator>(h, interaction_matrix(params), opt.tdhf);
    TdhfState state(prop, init_product_state(occ));
    return drive(state, schedule, probes, rng, plan, opt);
  }
  if (params.V != 0.0) throw InvalidArgument("the gaussian engine requires V = 0 (use engine = tdhf)");
  auto prop = std::make_shared<const SpectralPropagator>(h);
  if (opt.representation == Representation::Dense) {
    DenseGaussianState state(prop, init_product_state(occ));
    return drive(state, schedule, probes, rng, plan, opt);
  }
  OrbitalFrame state(prop, occ);
  return drive(state, schedule, probes, rng, plan, opt);
}

}  // namespace monferm
