#pragma once
// Run configuration: flat "key = value" text, one entry per line, '#'
// starts a comment. Command-line flags override file entries.

#include <map>
#include <string>
#include <vector>

#include "monferm/ensemble.hpp"

namespace monferm {

struct RunConfig {
  ModelParams params;
  ProtocolConfig protocol;
  std::vector<ObservableId> observables{ObservableId::parse("S1"), ObservableId::parse("C2")};
  std::string output_dir = ".";
  std::string format = "csv";  // csv | jsonl
  std::string run_id = "run";
  bool write_events = false;  // raw measurement records as JSON lines

  Engine engine() const { return protocol.trajectory.engine; }
  void validate() const;
};

// Known keys, in the order to_config_text writes them.
const std::vector<std::string>& config_keys();

// Throws InvalidArgument for unknown keys or unparsable values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses the file format; a repeated key is an error.
std::map<std::string, std::string> parse_key_values(const std::string& text);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string to_config_text(const RunConfig& cfg);

}  // namespace monferm
