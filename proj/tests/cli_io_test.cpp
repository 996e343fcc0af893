#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "exploitsim/config.hpp"
#include "exploitsim/report.hpp"
#include "exploitsim/scenario.hpp"

namespace fs = std::filesystem;

namespace exploitsim {
namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("exploitsim_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::permissions(path_, fs::perms::owner_all, fs::perm_options::add, ec);
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& path, const std::vector<std::string>& overrides) {
  try {
    parse_config(path, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfig, EmptyFileGivesDefaults) {
  TempDir dir;
  const ExperimentConfig cfg = parse_config(write_text(dir.path() / "empty.cfg", ""), {});
  EXPECT_EQ(cfg.env.videos_per_day, 1000u);
  EXPECT_EQ(cfg.particles, 1000u);
  EXPECT_EQ(cfg.num_users, 150u);
  EXPECT_EQ(cfg.env.days, 50u);
  EXPECT_EQ(cfg.env.timeline_segments, 1u);
}

TEST(ParseConfig, OverridesBeatFile) {
  TempDir dir;
  const auto path = write_text(dir.path() / "c.cfg",
                               "# cohort\nusers = 20\nparticles=300  # trailing comment\n\n"
                               "agent_kinds = ignorant, grounded\nregenerate_particles_daily = true\n");
  const ExperimentConfig cfg = parse_config(path, {"users=5", "seed=77"});
  EXPECT_EQ(cfg.num_users, 5u);
  EXPECT_EQ(cfg.particles, 300u);
  EXPECT_EQ(cfg.env.master_seed, 77u);
  EXPECT_TRUE(cfg.regenerate_particles_daily);
  EXPECT_EQ(cfg.agent_kinds, (std::vector<AgentKind>{AgentKind::kIgnorant, AgentKind::kGrounded}));
}

TEST(ParseConfig, BaseValuesSurviveWhenUnset) {
  ExperimentConfig base;
  base.smoothing_window = 5;
  base.num_users = 20;
  const ExperimentConfig cfg = parse_config("", {"days=7"}, base);
  EXPECT_EQ(cfg.smoothing_window, 5u);
  EXPECT_EQ(cfg.num_users, 20u);
  EXPECT_EQ(cfg.env.days, 7u);
}

TEST(ParseConfig, Errors) {
  TempDir dir;
  const std::string range = error_of(write_text(dir.path() / "a.cfg", "videos_per_day=0\n"), {});
  EXPECT_NE(range.find("videos_per_day"), std::string::npos) << range;
  EXPECT_NE(range.find("'0'"), std::string::npos) << range;
  EXPECT_NE(range.find("[1, "), std::string::npos) << range;

  const std::string unknown = error_of("", {"frobnicate=3"});
  EXPECT_NE(unknown.find("frobnicate"), std::string::npos) << unknown;

  EXPECT_NE(error_of("", {"days=-4"}), "");
  EXPECT_NE(error_of("", {"days=4.5"}), "");
  EXPECT_NE(error_of("", {"agents=ignorant,wizard"}).find("wizard"), std::string::npos);
  EXPECT_NE(error_of("", {"no_equals_sign"}), "");
  EXPECT_NE(error_of(write_text(dir.path() / "b.cfg", "just words\n"), {}).find("line 1"),
            std::string::npos);
  EXPECT_NE(error_of((dir.path() / "missing.cfg").string(), {}), "");
}

TEST(Csv, HeaderAndFormatting) {
  SeriesPoint p{3, AgentKind::kKnowsIrrationalities, 0.7733333333, 0.0123456789, -2.41234567, 1234567.0};
  const std::string csv = series_to_csv("fig1_watch_rate", {p});
  EXPECT_EQ(csv,
            "scenario,agent,day,mean_watch_rate,se_watch_rate,mean_human_reward,se_human_reward\n"
            "fig1_watch_rate,knows_irrationalities,3,0.773333,0.0123457,-2.41235,1.23457e+06\n");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(10.0), "10");
  EXPECT_EQ(format_number(-490.0), "-490");
}

TEST(Csv, RoundTripToPrintedPrecision) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-500.0, 10.0), rate(0.0, 1.0);
  std::vector<SeriesPoint> points;
  for (std::size_t i = 0; i < 300; ++i) {
    points.push_back({1 + i % 50, kAllAgentKinds[i % 6], rate(rng), rate(rng) * 0.1, unif(rng),
                      rate(rng) * 5});
  }
  const CsvSeries back = series_from_csv(series_to_csv("custom, \"quoted\"", points));
  EXPECT_EQ(back.scenario, "custom, \"quoted\"");
  ASSERT_EQ(back.points.size(), points.size());
  auto close = [](double a, double b) { return std::abs(a - b) <= 5e-6 * std::max(1.0, std::abs(b)); };
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(back.points[i].day, points[i].day);
    EXPECT_EQ(back.points[i].agent, points[i].agent);
    EXPECT_TRUE(close(back.points[i].mean_watch_rate, points[i].mean_watch_rate));
    EXPECT_TRUE(close(back.points[i].se_watch_rate, points[i].se_watch_rate));
    EXPECT_TRUE(close(back.points[i].mean_human_reward, points[i].mean_human_reward));
    EXPECT_TRUE(close(back.points[i].se_human_reward, points[i].se_human_reward));
    // Printing the parsed value again is a fixed point.
    EXPECT_EQ(format_number(back.points[i].mean_human_reward), format_number(points[i].mean_human_reward));
  }
}

Scenario tiny_scenario(ScenarioName name) {
  Scenario s = make_scenario(name);
  apply_ci_scale(s.config);
  s.config.num_users = 4;
  s.config.env.days = 8;
  s.config.env.videos_per_day = 40;
  s.config.particles = 40;
  return s;
}

TEST(Scenario, PresetsMatchFigures) {
  for (auto name : {ScenarioName::kFig1WatchRate, ScenarioName::kFig2HumanReward}) {
    const Scenario s = make_scenario(name);
    EXPECT_EQ(s.config.agent_kinds, five_systems());
    EXPECT_EQ(s.config.smoothing_window, 5u);
    EXPECT_EQ(s.config.num_users, 150u);
    EXPECT_EQ(s.config.env.videos_per_day, 1000u);
    EXPECT_EQ(s.config.particles, 1000u);
  }
  EXPECT_EQ(make_scenario(ScenarioName::kFig2HumanReward).metric, Metric::kHumanReward);
  const Scenario fig3 = make_scenario(ScenarioName::kFig3Grounded);
  EXPECT_EQ(fig3.config.agent_kinds.size(), 6u);
  EXPECT_EQ(fig3.config.agent_kinds.back(), AgentKind::kGrounded);
  for (auto n : kAllScenarios) EXPECT_EQ(parse_scenario_name(scenario_name(n)), n);

  ExperimentConfig ci;
  apply_ci_scale(ci);
  EXPECT_EQ(ci.num_users, 20u);
  EXPECT_EQ(ci.env.videos_per_day, 200u);
  EXPECT_EQ(ci.particles, 200u);
  EXPECT_EQ(ci.env.days, 30u);
}

TEST(RunScenario, WritesCsvAndSvg) {
  TempDir dir;
  const Scenario s = tiny_scenario(ScenarioName::kFig3Grounded);
  const auto out = run_scenario(s, dir.path() / "nested");
  EXPECT_EQ(out.csv.filename(), "fig3_grounded.csv");
  EXPECT_EQ(out.svg.filename(), "fig3_grounded.svg");
  const std::string csv = read_text(out.csv);
  EXPECT_EQ(csv, series_to_csv("fig3_grounded", smooth_series(out.raw, 5)));
  EXPECT_EQ(series_from_csv(csv).points.size(), 6u * 8u);

  const std::string svg = read_text(out.svg);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg.find("url("), std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++polylines;
  EXPECT_EQ(polylines, 6u);
  for (AgentKind k : kAllAgentKinds) {
    EXPECT_NE(svg.find("id=\"series-" + std::string(agent_name(k)) + "\""), std::string::npos);
    EXPECT_NE(svg.find("stroke=\"" + std::string(agent_color(k)) + "\""), std::string::npos);
  }
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  for (const auto& entry : fs::recursive_directory_iterator(dir.path()))
    EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(RunScenario, ByteIdenticalAcrossRunsAndThreads) {
  TempDir dir;
  const Scenario s = tiny_scenario(ScenarioName::kFig1WatchRate);
  const auto a = run_scenario(s, dir.path() / "a", 1);
  const auto b = run_scenario(s, dir.path() / "b", 1);
  const auto c = run_scenario(s, dir.path() / "c", 4);
  EXPECT_EQ(read_text(a.csv), read_text(b.csv));
  EXPECT_EQ(read_text(a.csv), read_text(c.csv));
  EXPECT_EQ(read_text(a.svg), read_text(c.svg));
}

TEST(RunScenario, UnwritableDirectoryIsIoError) {
  if (::geteuid() == 0) GTEST_SKIP() << "root ignores directory permissions";
  TempDir dir;
  const fs::path locked = dir.path() / "locked";
  fs::create_directories(locked);
  fs::permissions(locked, fs::perms::owner_read | fs::perms::owner_exec);
  EXPECT_THROW(run_scenario(tiny_scenario(ScenarioName::kCustom), locked), IoError);
}

TEST(RunScenario, OutputPathThatIsAFileIsIoError) {
  TempDir dir;
  const fs::path file = dir.path() / "plain_file";
  write_text(file, "x");
  EXPECT_THROW(run_scenario(tiny_scenario(ScenarioName::kCustom), file), IoError);
  EXPECT_THROW(write_file_atomic(file / "sub.csv", "data"), IoError);
}

TEST(WriteFileAtomic, ReplacesContentWithoutTempLeftovers) {
  TempDir dir;
  const fs::path p = dir.path() / "x.csv";
  write_file_atomic(p, "first\n");
  write_file_atomic(p, "second\n");
  EXPECT_EQ(read_text(p), "second\n");
  EXPECT_FALSE(fs::exists(dir.path() / "x.csv.tmp"));
}

// CLI ------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SIMULATE_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const std::string out = (dir.path() / "out").string();
  const std::string small = "--set users=2 --set days=3 --set videos_per_day=20 --set particles=20 --quiet";
  EXPECT_EQ(run_cli("--scenario fig2_human_reward --ci-scale " + small + " --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "fig2_human_reward.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "fig2_human_reward.svg"));
  EXPECT_EQ(run_cli("simulate --scenario custom " + small + " --seed 4 --threads 2 --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "custom.csv"));

  EXPECT_EQ(run_cli("--scenario nope --out " + out), 1);
  EXPECT_EQ(run_cli("--out " + out), 1);
  EXPECT_EQ(run_cli("--scenario custom --set videos_per_day=0 --out " + out), 1);
  EXPECT_EQ(run_cli("--scenario custom --set colour=blue --out " + out), 1);
  EXPECT_EQ(run_cli("--scenario custom --config " + (dir.path() / "missing.cfg").string()), 1);
  EXPECT_EQ(run_cli("--scenario custom --bogus-flag"), 1);

  const fs::path file = dir.path() / "plain_file";
  write_text(file, "x");
  EXPECT_EQ(run_cli("--scenario custom " + small + " --out " + file.string()), 2);
}

TEST(Cli, SameSeedSameBytes) {
  TempDir dir;
  const std::string small = "--set users=3 --set days=4 --set videos_per_day=25 --set particles=25 --quiet --seed 9";
  ASSERT_EQ(run_cli("--scenario fig3_grounded " + small + " --out " + (dir.path() / "a").string()), 0);
  ASSERT_EQ(run_cli("--scenario fig3_grounded " + small + " --threads 3 --out " + (dir.path() / "b").string()), 0);
  EXPECT_EQ(read_text(dir.path() / "a" / "fig3_grounded.csv"), read_text(dir.path() / "b" / "fig3_grounded.csv"));
}

}  // namespace
}  // namespace exploitsim
