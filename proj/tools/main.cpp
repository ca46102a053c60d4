#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailwave/app.hpp"
#include "tailwave/grid.hpp"
#include "tailwave/waveops.hpp"

using namespace tailwave;

namespace {

std::vector<double> parse_values(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("--values: cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tailwave: late-time tails of radial wave equations with potential and nonlinearity"};
  app.set_version_flag("--version", std::string(TAILWAVE_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  bool dry_run = false;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "solve one configuration and write CSV reports");
  run->add_option("config", config_path, "experiment JSON")->required();
  run->add_flag("--dry-run", dry_run, "print the resolved parameters without solving");
  run->add_option("--out", out_dir, "override output.dir");

  std::string axis, values;
  auto* sweep = app.add_subcommand("sweep", "repeat a run along one parameter axis");
  sweep->add_option("config", config_path, "experiment JSON")->required();
  sweep->add_option("--axis", axis, "lambda | eps | k | p | h")->required();
  sweep->add_option("--values", values, "comma separated values")->required();
  sweep->add_option("--out", out_dir, "override output.dir");

  std::string suite;
  std::string verify_out = "verify_out";
  auto* verify = app.add_subcommand("verify", "run a built-in verification suite");
  verify->add_option("suite", suite, "lemmas | theorems | majorant | equivalence | all")->required();
  verify->add_option("--out", verify_out, "directory for verify.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return cmd_verify(suite, verify_out, std::cout);
    ExperimentConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (*run) return cmd_run(cfg, dry_run, std::cout);
    return cmd_sweep(cfg, axis, parse_values(values), std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return 3;
  } catch (const NonConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return 3;
  } catch (const GridTooLargeError& e) {
    std::cerr << "grid: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
