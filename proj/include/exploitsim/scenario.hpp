#pragma once

// Scenario presets for the three figures plus a free-form `custom` run.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exploitsim/agents.hpp"
#include "exploitsim/report.hpp"
#include "exploitsim/simulator.hpp"

namespace exploitsim {

enum class ScenarioName { kFig1WatchRate, kFig2HumanReward, kFig3Grounded, kCustom };

inline constexpr std::array<ScenarioName, 4> kAllScenarios = {
    ScenarioName::kFig1WatchRate, ScenarioName::kFig2HumanReward, ScenarioName::kFig3Grounded,
    ScenarioName::kCustom};

inline constexpr std::string_view scenario_name(ScenarioName s) {
  switch (s) {
    case ScenarioName::kFig1WatchRate: return "fig1_watch_rate";
    case ScenarioName::kFig2HumanReward: return "fig2_human_reward";
    case ScenarioName::kFig3Grounded: return "fig3_grounded";
    case ScenarioName::kCustom: return "custom";
  }
  return "custom";
}

inline std::optional<ScenarioName> parse_scenario_name(std::string_view name) {
  for (auto s : kAllScenarios) {
    if (scenario_name(s) == name) return s;
  }
  return std::nullopt;
}

struct Scenario {
  ScenarioName name = ScenarioName::kCustom;
  Metric metric = Metric::kWatchRate;
  ExperimentConfig config;
};

inline const std::vector<AgentKind>& five_systems() {
  static const std::vector<AgentKind> kinds = {
      AgentKind::kIgnorant, AgentKind::kKnowsPreferences, AgentKind::kKnowsIrrationalities,
      AgentKind::kOmniscient, AgentKind::kAligned};
  return kinds;
}

// Full-scale preset: 150 users, 1000 videos/day, 1000 particles, 50 days,
// single-segment timelines, 5-day smoothing for reporting. `custom` keeps the
// raw series and the five-system default agent set.
inline Scenario make_scenario(ScenarioName name) {
  Scenario s;
  s.name = name;
  s.config.scenario_name = std::string(scenario_name(name));
  s.config.agent_kinds = five_systems();
  switch (name) {
    case ScenarioName::kFig1WatchRate:
      s.metric = Metric::kWatchRate;
      s.config.smoothing_window = 5;
      break;
    case ScenarioName::kFig2HumanReward:
      s.metric = Metric::kHumanReward;
      s.config.smoothing_window = 5;
      break;
    case ScenarioName::kFig3Grounded:
      s.metric = Metric::kWatchRate;
      s.config.smoothing_window = 5;
      s.config.agent_kinds.push_back(AgentKind::kGrounded);
      break;
    case ScenarioName::kCustom:
      s.metric = Metric::kWatchRate;
      s.config.smoothing_window = 1;
      break;
  }
  return s;
}

// Reduced size for quick runs.
inline void apply_ci_scale(ExperimentConfig& cfg) {
  cfg.num_users = 20;
  cfg.env.videos_per_day = 200;
  cfg.particles = 200;
  cfg.env.days = 30;
}

struct ScenarioOutputs {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::vector<SeriesPoint> raw;
  std::vector<SeriesPoint> reported;  // after smoothing
};

// Runs the experiment and writes `<scenario>.csv` and `<scenario>.svg` into
// `out_dir`, which is created if missing. Both files carry the smoothed series.
inline ScenarioOutputs run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                                    std::size_t threads = 1, const ProgressFn& progress = {}) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }

  ScenarioOutputs out;
  out.raw = run_experiment(s.config, threads, progress);
  out.reported = smooth_series(out.raw, s.config.smoothing_window);

  const std::string& name = s.config.scenario_name;
  out.csv = out_dir / (name + ".csv");
  out.svg = out_dir / (name + ".svg");
  write_file_atomic(out.csv, series_to_csv(name, out.reported));
  write_file_atomic(out.svg, series_to_svg(name, out.reported, s.metric));
  return out;
}

}  // namespace exploitsim
