// simulate: run a scenario and write <scenario>.csv / <scenario>.svg.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exploitsim/exploitsim.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate greedy video recommenders with varying knowledge of the user"};
  app.require_subcommand(0, 1);

  std::string scenario_arg;
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool ci_scale = false;
  std::size_t threads = 0;
  bool quiet = false;

  // `simulate simulate --scenario ...` and `simulate --scenario ...` both work.
  CLI::App* sub = app.add_subcommand("simulate", "Run one scenario");
  for (CLI::App* a : {&app, sub}) {
    a->add_option("--scenario", scenario_arg,
                  "fig1_watch_rate | fig2_human_reward | fig3_grounded | custom");
    a->add_option("--config", config_path, "key = value configuration file");
    a->add_option("--set", overrides, "key=value override (repeatable)");
    a->add_option("--seed", seed, "master seed");
    a->add_option("--out", out_dir, "output directory");
    a->add_flag("--ci-scale", ci_scale, "20 users, 200 videos/day, 200 particles, 30 days");
    a->add_option("--threads", threads, "worker threads (0 = all available)");
    a->add_flag("--quiet", quiet, "no progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (scenario_arg.empty()) {
    std::cerr << "error: --scenario is required\n" << app.help();
    return kExitUsage;
  }
  const auto name = exploitsim::parse_scenario_name(scenario_arg);
  if (!name) {
    std::cerr << "error: unknown scenario '" << scenario_arg
              << "' (fig1_watch_rate, fig2_human_reward, fig3_grounded, custom)\n";
    return kExitUsage;
  }

  exploitsim::Scenario scenario = exploitsim::make_scenario(*name);
  try {
    if (ci_scale) exploitsim::apply_ci_scale(scenario.config);
    if (seed) overrides.push_back("master_seed=" + std::to_string(*seed));
    scenario.config = exploitsim::parse_config(config_path, overrides, scenario.config);
  } catch (const exploitsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  exploitsim::ProgressFn progress;
  if (!quiet) {
    progress = [last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
      const std::size_t pct = done * 100 / total;
      if (pct / 10 != last / 10 || done == total) {
        std::cerr << "\r" << done << "/" << total << " episodes (" << pct << "%)" << std::flush;
        last = pct;
      }
      if (done == total) std::cerr << '\n';
    };
  }

  try {
    const auto out = exploitsim::run_scenario(scenario, out_dir, threads, progress);
    std::cout << out.csv.string() << '\n' << out.svg.string() << '\n';
  } catch (const exploitsim::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
