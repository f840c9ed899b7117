// Command-line driver: one subcommand per experiment, configuration from a
// JSON file with flag and PSIDO_* environment overrides. Exit code 0 iff
// every named invariant check passes.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "psdo/harness.hpp"

namespace {

psdo::json load_config(const std::string& path) {
  if (path.empty()) return psdo::json::object();
  std::ifstream f(path);
  if (!f) {
    std::cerr << "cannot open config file: " << path << "\n";
    std::exit(2);
  }
  psdo::json j;
  f >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudodifferential operator calculus on the circle"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long long seed = -1;
  int grid_k = 0;

  const std::vector<std::string> experiments = {
      "compose",    "membership", "taylor",    "ellipticity",
      "parametrix", "toeplitz",   "resolvent", "sweep"};
  for (const auto& name : experiments) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory for reports");
    sub->add_option("--seed", seed, "seed for randomized suites");
    sub->add_option("--grid-K", grid_k, "frequency cutoff override");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    psdo::json j = load_config(config_path);
    j["experiment"] = app.get_subcommands().front()->get_name();
    auto cfg = psdo::ExperimentConfig::from_json(j);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed >= 0) cfg.seed = (unsigned long long)(seed);
    if (grid_k > 0) cfg.K = grid_k;
    auto env = psdo::run(cfg);
    std::cout << env.to_envelope_json().dump(2) << "\n";
    for (const auto& c : env.checks)
      std::cerr << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " (value "
                << c.value << " " << c.comparison << " " << c.threshold
                << ")\n";
    return env.pass() ? 0 : 1;
  } catch (const psdo::PsdoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
