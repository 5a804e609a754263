#pragma once
// CSV and JSON-lines writers. Every floating-point number is printed with
// 17 significant digits.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "monferm/ensemble.hpp"

namespace monferm {

// Build identifier stamped into output headers.
const char* build_id();

std::string format_double(double v);

// Column names of the summary CSV, in order.
const std::vector<std::string>& csv_columns();

struct RunMeta {
  std::string run_id;
  std::string engine;  // gaussian | tdhf | analytics
  ModelParams params;
  std::uint64_t seed = 0;
};

// One line of the shared schema. For analytics tables, region names the
// independent variable and t holds its value.
struct CsvRecord {
  std::string observable;
  std::string region;
  std::optional<double> t;  // empty prints "steady"
  double mean = 0.0;
  double stderr_ = 0.0;
  int n_traj = 0;
};

void write_csv_header(std::ostream& os, const std::vector<std::string>& extra_comments = {});
void write_csv_record(std::ostream& os, const RunMeta& meta, const CsvRecord& r);
void write_jsonl_record(std::ostream& os, const RunMeta& meta, const CsvRecord& r);

std::vector<CsvRecord> summary_records(const EnsembleSummary& s);

// Whole summary in the requested format (csv | jsonl).
void write_summary(std::ostream& os, const RunMeta& meta, const EnsembleSummary& s, const std::string& format);

// One JSON line per trajectory with its measurement record.
void write_events_jsonl(std::ostream& os, const std::string& run_id, int traj, const TrajectoryRecord& rec);

// One JSON line per (trajectory, probe) with the snapshot C_traj(x).
void write_correlator_jsonl(std::ostream& os, const RunMeta& meta, int traj, const TrajectoryRecord& rec);

struct CorrelatorSnapshots {
  RunMeta meta;
  std::vector<std::vector<double>> cx;  // pooled over trajectories and probes
  std::vector<int> traj;                // trajectory of each snapshot
};

// Reads a file written by write_correlator_jsonl.
CorrelatorSnapshots read_correlator_jsonl(std::istream& is);

// Two columns y, phi.
void write_profile_csv(std::ostream& os, const std::vector<double>& y, const std::vector<double>& phi);

}  // namespace monferm
