// phlab command-line front end. Everything goes through the C API: flags become a JSON
// request, the primary JSON document goes to stdout and artifacts to --out.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phlab/phlab.h"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

const Flag kRealFlags[] = {
    {"delta", "separation / gluing scale"},
    {"eps", "leaf radius or expansivity scale"},
    {"r", "good-segment rate"},
    {"pressure_delta", "separation scale for full and bad pressure"},
    {"holder_K", "Hoelder constant of the potential (default: measured)"},
    {"holder_alpha", "Hoelder exponent of the potential"},
    {"jitter", "scan: matrix-entry radius (eigen-oracle)"},
    {"strength_jitter", "scan: mane strength radius"},
    {"potential_jitter", "scan: sup-norm radius a of the potential jitter"},
    {"strength", "example-mane: perturbation strength"},
};

const Flag kIntFlags[] = {
    {"n_min", "smallest orbit length"},
    {"n_max", "largest orbit length"},
    {"depth", "inverse-limit history depth"},
    {"samples", "sample count"},
    {"window", "expansivity window m"},
    {"pairs", "glue: segment pairs"},
    {"segment_length", "maximal segment length"},
    {"draws", "scan: number of perturbation draws"},
};

std::string flag_name(const char* key) {
  std::string s = std::string("--") + key;
  for (auto& c : s)
    if (c == '_') c = '-';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phlab: thermodynamic formalism estimators for partially hyperbolic torus maps"};
  app.require_subcommand(0, 0);

  std::vector<std::string> commands;
  for (size_t i = 0; i < phlab_command_count(); ++i) commands.emplace_back(phlab_command_name(i));

  std::string command, config, out_dir, potential = "zero", mode = "sets";
  std::optional<unsigned long long> seed;
  int threads = 0;
  std::vector<double> r_list;
  bool quiet = false;

  app.add_option("command", command, "command to run")->required()->check(CLI::IsMember(commands));
  app.add_option("--config", config, "system config file");
  app.add_option("--out", out_dir, "directory for artifacts");
  app.add_option("--seed", seed, "random seed (mandatory)")->required();
  app.add_option("--threads", threads, "worker thread cap, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_option("--mode", mode, "estimation mode")->check(CLI::IsMember({"sets", "eigen-oracle"}));
  app.add_option("--potential", potential, "zero | const:C | cos:I[:A] | wave:K1,..:A:P, terms joined by +");
  app.add_option("--r-list", r_list, "decompose: list of r values")->delimiter(',');
  app.add_flag("--quiet", quiet, "do not print the JSON document");

  std::vector<std::optional<double>> reals(std::size(kRealFlags));
  std::vector<std::optional<long long>> ints(std::size(kIntFlags));
  for (size_t i = 0; i < std::size(kRealFlags); ++i)
    app.add_option(flag_name(kRealFlags[i].name), reals[i], kRealFlags[i].help);
  for (size_t i = 0; i < std::size(kIntFlags); ++i)
    app.add_option(flag_name(kIntFlags[i].name), ints[i], kIntFlags[i].help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  nlohmann::ordered_json req;
  req["command"] = command;
  if (!config.empty()) req["config_path"] = config;
  req["seed"] = *seed;
  req["threads"] = threads;
  req["mode"] = mode;
  req["potential"] = potential;
  if (!r_list.empty()) req["r_list"] = r_list;
  for (size_t i = 0; i < std::size(kRealFlags); ++i)
    if (reals[i]) req[kRealFlags[i].name] = *reals[i];
  for (size_t i = 0; i < std::size(kIntFlags); ++i)
    if (ints[i]) req[kIntFlags[i].name] = *ints[i];

  phlab_result* res = nullptr;
  const phlab_status st = phlab_run_json(req.dump().c_str(), &res);
  if (!res) {
    std::cerr << "phlab: " << phlab_status_name(st) << ": " << phlab_last_error() << "\n";
    return st == PHLAB_CONFIG_ERROR || st == PHLAB_INVALID_ARGUMENT ? 2 : 3;
  }
  for (size_t i = 0; i < phlab_result_warning_count(res); ++i)
    std::cerr << "phlab: warning: " << phlab_result_warning(res, i) << "\n";
  if (!quiet) std::fputs(phlab_result_json(res), stdout);
  int code = phlab_result_exit_code(res);
  if (code != 0) std::cerr << "phlab: " << phlab_status_name(st) << ": " << phlab_last_error() << "\n";
  if (!out_dir.empty() && phlab_result_write(res, out_dir.c_str()) != PHLAB_OK) {
    std::cerr << "phlab: cannot write artifacts: " << phlab_last_error() << "\n";
    if (code == 0) code = 2;
  }
  phlab_result_free(res);
  return code;
}
