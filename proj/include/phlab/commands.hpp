// Batch commands behind the CLI and the C API. A command produces a JSON document plus
// named artifacts; nothing here touches the filesystem except load and write helpers.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace phlab {

// Unset numeric fields (NaN / -1) take the command's default.
struct RunConfig {
  std::string command;
  std::string config_path;  // system config file
  std::string system_text;  // inline config text; used when config_path is empty
  std::string potential = "zero";
  double holder_K = std::numeric_limits<double>::quiet_NaN();
  double holder_alpha = std::numeric_limits<double>::quiet_NaN();
  bool seed_set = false;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string mode = "sets";  // sets | eigen-oracle

  double delta = std::numeric_limits<double>::quiet_NaN();
  double eps = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double pressure_delta = std::numeric_limits<double>::quiet_NaN();
  int n_min = -1, n_max = -1;
  int depth = -1;

  int samples = -1;         // gamma, decompose, certify expansivity
  int window = -1;          // gamma, certify
  int pairs = -1;           // glue, certify
  int segment_length = -1;  // glue, certify
  int draws = -1;           // scan
  double jitter = std::numeric_limits<double>::quiet_NaN();            // scan: matrix-entry radius
  double strength_jitter = std::numeric_limits<double>::quiet_NaN();   // scan: mane strength radius
  double potential_jitter = std::numeric_limits<double>::quiet_NaN();  // scan: sup-norm radius a
  double strength = std::numeric_limits<double>::quiet_NaN();          // example-mane
  std::vector<double> r_list;                                          // decompose
};

struct Artifact {
  std::string name;
  std::string content;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config error, 3 numerical failure
  std::string json;   // primary document; also the first artifact
  std::vector<Artifact> artifacts;
  std::vector<std::string> warnings;
  std::string error_code;  // empty on success
  std::string error_message;
};

const std::vector<std::string>& command_names();

// Never throws; failures are reported through exit_code and the JSON "error" field.
RunResult run_command(const RunConfig& cfg);

// Keys mirror the RunConfig field names; unknown keys are a config error.
RunConfig run_config_from_json(const std::string& text);

void write_artifacts(const RunResult& result, const std::string& dir);

// Closed forms for linear and product kinds (toral eigendata). Center eigenvalue excluded
// from the unstable and stable sums.
double eigen_entropy(const std::vector<double>& eigenvalues);
double eigen_unstable_entropy(const std::vector<double>& eigenvalues, bool has_center);
double eigen_stable_entropy(const std::vector<double>& eigenvalues, double det, bool has_center);

}  // namespace phlab
