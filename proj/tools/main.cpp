#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cachebandit/config.hpp"
#include "cachebandit/runner.hpp"
#include "cachebandit/simulator.hpp"

using namespace cachebandit;

namespace {

ExperimentConfig load_or_default(const std::string& path) {
  return path.empty() ? default_paper_config() : load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache content placement with bandit learning and switching costs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicates;
  std::optional<unsigned> threads;
  std::string policies;
  bool full_resolution = false;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run an experiment and write CSV/JSON outputs");
  run->add_option("--config", config_path, "config file (built-in defaults if omitted)");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed base");
  run->add_option("--replicates", replicates, "replicates per policy and point")
      ->check(CLI::PositiveNumber);
  run->add_option("--policies", policies, "policy list, e.g. \"cucb,iub\"");
  run->add_option("--threads", threads, "worker threads (0: all cores)");
  run->add_flag("--full-resolution", full_resolution, "keep every period");
  run->add_flag("-q,--quiet", quiet, "no progress output");

  std::uint64_t t_max = 10000;
  auto* bounds = app.add_subcommand("bounds", "evaluate regret bounds on a small instance");
  bounds->add_option("--config", config_path, "config file")->required();
  bounds->add_option("--t-max", t_max, "largest period")->check(CLI::PositiveNumber);

  app.add_subcommand("paper-defaults", "print the default experiment config");

  std::string policy = "cucbsc-sqrt";
  std::uint64_t trace_seed = 1;
  auto* trace = app.add_subcommand("trace", "write the per-period trace of one episode");
  trace->add_option("--config", config_path, "config file (built-in defaults if omitted)");
  trace->add_option("--policy", policy, "policy spec");
  trace->add_option("--seed", trace_seed, "episode seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("paper-defaults")) {
      std::cout << format_config(default_paper_config());
      return 0;
    }
    ExperimentConfig config = load_or_default(config_path);
    if (*run) {
      if (seed) config.seed = *seed;
      if (replicates) config.replicates = *replicates;
      if (threads) config.threads = *threads;
      if (!policies.empty()) {
        config.policies = parse_policy_list(policies, config.policy_defaults);
      }
      if (full_resolution) config.full_resolution = true;
      RunOptions options;
      if (!quiet) options.log = &std::cerr;
      const ExperimentResult result = run_experiment(config, out_dir, options);
      if (!quiet) {
        std::cerr << "wrote " << out_dir << "/metrics.csv, sweep.csv, metadata.json ("
                  << result.fingerprint << ")\n";
      }
      return 0;
    }
    if (*bounds) {
      write_bounds_table(std::cout, config, t_max);
      return 0;
    }
    if (*trace) {
      const auto specs = parse_policy_list(policy, config.policy_defaults);
      const Scenario scenario = build_scenario(config, 0);
      write_trace_csv(std::cout, run_episode(scenario, specs.front(), trace_seed));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
