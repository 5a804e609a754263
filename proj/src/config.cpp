#include "monferm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "monferm/errors.hpp"
#include "monferm/output.hpp"

namespace monferm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InvalidArgument("config: " + key + ": not a number: " + v);
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InvalidArgument("config: " + key + ": not an integer: " + v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config: " + key + ": not a boolean: " + v);
}

std::vector<ObservableId> parse_observables(const std::string& v) {
  std::vector<ObservableId> ids;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) ids.push_back(ObservableId::parse(item));
  }
  if (ids.empty()) throw InvalidArgument("config: observables: empty list");
  return ids;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  protocol.validate();
  if (format != "csv" && format != "jsonl") throw InvalidArgument("config: format must be csv or jsonl");
  if (run_id.empty() || run_id.find_first_of("/\\ \t") != std::string::npos)
    throw InvalidArgument("config: run_id must be a non-empty name without separators or spaces");
  if (engine() == Engine::Gaussian && params.V != 0.0)
    throw InvalidArgument("config: the gaussian engine requires V = 0; use engine = tdhf");
  // Rejects correlator observables on open chains.
  ProbePlan(params, observables);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "L",      "J1",           "J2_re", "J2_im",      "V",             "gamma",  "n0",     "boundary",
      "warmup", "obs_interval", "t_max", "n_traj",     "seed",          "n_resample", "initial_state",
      "engine", "representation", "observables", "output", "format", "run_id", "events"};
  return keys;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto& p = c.params;
  auto& pr = c.protocol;
  if (key == "L") p.L = static_cast<int>(to_int(key, v));
  else if (key == "J1") p.J1 = to_double(key, v);
  else if (key == "J2_re") p.J2.real(to_double(key, v));
  else if (key == "J2_im") p.J2.imag(to_double(key, v));
  else if (key == "V") p.V = to_double(key, v);
  else if (key == "gamma") p.gamma = to_double(key, v);
  else if (key == "n0") p.n0 = to_double(key, v);
  else if (key == "boundary") p.boundary = parse_boundary(v);
  else if (key == "warmup") pr.warmup = to_double(key, v);
  else if (key == "obs_interval") pr.obs_interval = to_double(key, v);
  else if (key == "t_max") pr.t_max = to_double(key, v);
  else if (key == "n_traj") pr.n_traj = static_cast<int>(to_int(key, v));
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw InvalidArgument("config: seed must be >= 0");
    pr.master_seed = static_cast<std::uint64_t>(s);
  } else if (key == "n_resample") pr.n_resample = static_cast<int>(to_int(key, v));
  else if (key == "initial_state") {
    if (v == "random") pr.random_initial_state = true;
    else if (v == "spread") pr.random_initial_state = false;
    else throw InvalidArgument("config: initial_state must be random or spread");
  } else if (key == "engine") pr.trajectory.engine = parse_engine(v);
  else if (key == "representation") pr.trajectory.representation = parse_representation(v);
  else if (key == "observables") c.observables = parse_observables(v);
  else if (key == "output") c.output_dir = v;
  else if (key == "format") c.format = v;
  else if (key == "run_id") c.run_id = v;
  else if (key == "events") c.write_events = to_bool(key, v);
  else throw InvalidArgument("config: unknown key: " + key);
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": repeated key " + key);
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  for (const auto& [k, v] : parse_key_values(text)) set_config_value(cfg, k, v);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& c) {
  const auto& p = c.params;
  const auto& pr = c.protocol;
  std::string obs;
  for (const auto& id : c.observables) obs += (obs.empty() ? "" : ",") + id.str();
  std::ostringstream os;
  os << "L = " << p.L << '\n'
     << "J1 = " << format_double(p.J1) << '\n'
     << "J2_re = " << format_double(p.J2.real()) << '\n'
     << "J2_im = " << format_double(p.J2.imag()) << '\n'
     << "V = " << format_double(p.V) << '\n'
     << "gamma = " << format_double(p.gamma) << '\n'
     << "n0 = " << format_double(p.n0) << '\n'
     << "boundary = " << to_string(p.boundary) << '\n'
     << "warmup = " << format_double(pr.warmup) << '\n'
     << "obs_interval = " << format_double(pr.obs_interval) << '\n'
     << "t_max = " << format_double(pr.t_max) << '\n'
     << "n_traj = " << pr.n_traj << '\n'
     << "seed = " << pr.master_seed << '\n'
     << "n_resample = " << pr.n_resample << '\n'
     << "initial_state = " << (pr.random_initial_state ? "random" : "spread") << '\n'
     << "engine = " << to_string(pr.trajectory.engine) << '\n'
     << "representation = " << to_string(pr.trajectory.representation) << '\n'
     << "observables = " << obs << '\n'
     << "output = " << c.output_dir << '\n'
     << "format = " << c.format << '\n'
     << "run_id = " << c.run_id << '\n'
     << "events = " << (c.write_events ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace monferm
