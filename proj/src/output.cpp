#include "monferm/output.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "monferm/errors.hpp"

#ifndef MONFERM_BUILD_ID
#define MONFERM_BUILD_ID "unknown"
#endif

namespace monferm {

const char* build_id() { return MONFERM_BUILD_ID; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"run_id", "engine", "L",      "gamma",    "V",   "J1",
                                             "J2_re",  "J2_im",  "n0",     "boundary", "seed", "observable",
                                             "region", "t",      "mean",   "stderr",   "n_traj"};
  return cols;
}

void write_csv_header(std::ostream& os, const std::vector<std::string>& extra_comments) {
  os << "# units: J1 = 1; energies and V in J1, gamma in J1, t in 1/J1, lengths in lattice sites; entropies in nats\n";
  os << "# build: " << build_id() << '\n';
  for (const auto& c : extra_comments) os << "# " << c << '\n';
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_csv_record(std::ostream& os, const RunMeta& m, const CsvRecord& r) {
  const auto& p = m.params;
  os << m.run_id << ',' << m.engine << ',' << p.L << ',' << format_double(p.gamma) << ',' << format_double(p.V) << ','
     << format_double(p.J1) << ',' << format_double(p.J2.real()) << ',' << format_double(p.J2.imag()) << ','
     << format_double(p.n0) << ',' << to_string(p.boundary) << ',' << m.seed << ',' << r.observable << ',' << r.region
     << ',' << (r.t ? format_double(*r.t) : "steady") << ',' << format_double(r.mean) << ','
     << format_double(r.stderr_) << ',' << r.n_traj << '\n';
}

void write_jsonl_record(std::ostream& os, const RunMeta& m, const CsvRecord& r) {
  const auto& p = m.params;
  // Written by hand so numbers keep 17 significant digits.
  os << "{\"run_id\":" << nlohmann::json(m.run_id).dump() << ",\"engine\":\"" << m.engine << "\",\"L\":" << p.L
     << ",\"gamma\":" << format_double(p.gamma) << ",\"V\":" << format_double(p.V)
     << ",\"J1\":" << format_double(p.J1) << ",\"J2_re\":" << format_double(p.J2.real())
     << ",\"J2_im\":" << format_double(p.J2.imag()) << ",\"n0\":" << format_double(p.n0) << ",\"boundary\":\""
     << to_string(p.boundary) << "\",\"seed\":" << m.seed << ",\"observable\":" << nlohmann::json(r.observable).dump()
     << ",\"region\":" << nlohmann::json(r.region).dump() << ",\"t\":" << (r.t ? format_double(*r.t) : "\"steady\"")
     << ",\"mean\":" << format_double(r.mean) << ",\"stderr\":" << format_double(r.stderr_)
     << ",\"n_traj\":" << r.n_traj << "}\n";
}

std::vector<CsvRecord> summary_records(const EnsembleSummary& s) {
  std::vector<CsvRecord> out;
  out.reserve(s.rows.size());
  for (const auto& r : s.rows) out.push_back({r.observable, r.region, r.t, r.mean, r.stderr_, r.n_traj});
  return out;
}

void write_summary(std::ostream& os, const RunMeta& meta, const EnsembleSummary& s, const std::string& format) {
  if (format == "csv") {
    write_csv_header(os);
    for (const auto& r : summary_records(s)) write_csv_record(os, meta, r);
  } else if (format == "jsonl") {
    for (const auto& r : summary_records(s)) write_jsonl_record(os, meta, r);
  } else {
    throw InvalidArgument("unknown output format " + format);
  }
}

void write_events_jsonl(std::ostream& os, const std::string& run_id, int traj, const TrajectoryRecord& rec) {
  os << "{\"run_id\":" << nlohmann::json(run_id).dump() << ",\"traj\":" << traj << ",\"events\":[";
  for (std::size_t i = 0; i < rec.events.size(); ++i) {
    const auto& e = rec.events[i];
    os << (i ? "," : "") << '[' << format_double(e.t) << ',' << e.site << ',' << static_cast<int>(e.outcome) << ','
       << format_double(e.p_click) << ']';
  }
  os << "]}\n";
}

void write_correlator_jsonl(std::ostream& os, const RunMeta& m, int traj, const TrajectoryRecord& rec) {
  const auto& p = m.params;
  for (std::size_t k = 0; k < rec.correlator.size(); ++k) {
    os << "{\"run_id\":" << nlohmann::json(m.run_id).dump() << ",\"engine\":\"" << m.engine << "\",\"L\":" << p.L
       << ",\"gamma\":" << format_double(p.gamma) << ",\"V\":" << format_double(p.V)
       << ",\"J1\":" << format_double(p.J1) << ",\"J2_re\":" << format_double(p.J2.real())
       << ",\"J2_im\":" << format_double(p.J2.imag()) << ",\"n0\":" << format_double(p.n0) << ",\"boundary\":\""
       << to_string(p.boundary) << "\",\"seed\":" << m.seed << ",\"traj\":" << traj
       << ",\"t\":" << format_double(rec.probe_times[k]) << ",\"Cx\":[";
    const auto& cx = rec.correlator[k];
    for (std::size_t x = 0; x < cx.size(); ++x) os << (x ? "," : "") << format_double(cx[x]);
    os << "]}\n";
  }
}

CorrelatorSnapshots read_correlator_jsonl(std::istream& is) {
  CorrelatorSnapshots out;
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      RunMeta m;
      m.run_id = j.at("run_id").get<std::string>();
      m.engine = j.at("engine").get<std::string>();
      m.params.L = j.at("L").get<int>();
      m.params.gamma = j.at("gamma").get<double>();
      m.params.V = j.at("V").get<double>();
      m.params.J1 = j.at("J1").get<double>();
      m.params.J2 = cplx(j.at("J2_re").get<double>(), j.at("J2_im").get<double>());
      m.params.n0 = j.at("n0").get<double>();
      m.params.boundary = parse_boundary(j.at("boundary").get<std::string>());
      m.seed = j.at("seed").get<std::uint64_t>();
      if (first) {
        out.meta = m;
        first = false;
      } else if (m.run_id != out.meta.run_id || m.params.L != out.meta.params.L ||
                 m.params.gamma != out.meta.params.gamma) {
        throw InvalidArgument("mixed runs in one snapshot file");
      }
      auto cx = j.at("Cx").get<std::vector<double>>();
      if (static_cast<int>(cx.size()) != m.params.L) throw InvalidArgument("snapshot length != L");
      out.cx.push_back(std::move(cx));
      out.traj.push_back(j.at("traj").get<int>());
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("snapshot line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (first) throw InvalidArgument("snapshot file is empty");
  return out;
}

void write_profile_csv(std::ostream& os, const std::vector<double>& y, const std::vector<double>& phi) {
  os << "y,phi\n";
  for (std::size_t i = 0; i < y.size(); ++i) os << format_double(y[i]) << ',' << format_double(phi[i]) << '\n';
}

}  // namespace monferm
