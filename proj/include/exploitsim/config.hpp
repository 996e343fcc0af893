#pragma once

// Flat `key = value` configuration files and command-line overrides.
//
//   # comment
//   num_users = 20
//   agent_kinds = ignorant, omniscient
//
// Keys are ExperimentConfig field names; `users`, `seed` and `agents` are
// accepted as short aliases. Later sources win: base < file < overrides.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "exploitsim/agents.hpp"
#include "exploitsim/simulator.hpp"

namespace exploitsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::uint64_t parse_unsigned(std::string_view key, std::string_view value,
                                    std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  const std::string range = "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  if (ec == std::errc::result_out_of_range) {
    throw ConfigError("value '" + std::string(value) + "' for key '" + std::string(key) +
                      "' is out of range " + range);
  }
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("value '" + std::string(value) + "' for key '" + std::string(key) +
                      "' is not a non-negative integer");
  }
  if (out < lo || out > hi) {
    throw ConfigError("value '" + std::string(value) + "' for key '" + std::string(key) +
                      "' is out of range " + range);
  }
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("value '" + std::string(value) + "' for key '" + std::string(key) +
                    "' is not a boolean (true/false)");
}

inline std::vector<AgentKind> parse_agents(std::string_view key, std::string_view value) {
  std::vector<AgentKind> kinds;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string_view item =
        trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    if (const auto kind = parse_agent_kind(item)) {
      kinds.push_back(*kind);
    } else {
      throw ConfigError("value '" + std::string(item) + "' for key '" + std::string(key) +
                        "' is not an agent kind (ignorant, knows_preferences, "
                        "knows_irrationalities, omniscient, aligned, grounded)");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return kinds;
}

inline constexpr std::uint64_t kMaxCount = 100'000'000;

}  // namespace detail

// Applies one key/value pair to `cfg`.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  using detail::kMaxCount;
  using detail::parse_unsigned;
  key = detail::trim(key);
  value = detail::trim(value);
  if (key == "videos_per_day") {
    cfg.env.videos_per_day = parse_unsigned(key, value, 1, kMaxCount);
  } else if (key == "days") {
    cfg.env.days = parse_unsigned(key, value, 1, kMaxCount);
  } else if (key == "timeline_segments") {
    cfg.env.timeline_segments = parse_unsigned(key, value, 1, 10'000);
  } else if (key == "master_seed" || key == "seed") {
    cfg.env.master_seed =
        parse_unsigned(key, value, 0, std::numeric_limits<std::uint64_t>::max());
  } else if (key == "num_users" || key == "users") {
    cfg.num_users = parse_unsigned(key, value, 1, kMaxCount);
  } else if (key == "particles") {
    cfg.particles = parse_unsigned(key, value, 1, kMaxCount);
  } else if (key == "smoothing_window") {
    cfg.smoothing_window = parse_unsigned(key, value, 1, kMaxCount);
  } else if (key == "agent_kinds" || key == "agents") {
    cfg.agent_kinds = detail::parse_agents(key, value);
  } else if (key == "scenario_name") {
    if (value.empty()) throw ConfigError("value for key 'scenario_name' must not be empty");
    cfg.scenario_name = std::string(value);
  } else if (key == "regenerate_particles_daily") {
    cfg.regenerate_particles_daily = detail::parse_bool(key, value);
  } else if (key == "aligned_expected_utility") {
    cfg.aligned_expected_utility = detail::parse_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

// Parses `key=value` (used for --set).
inline void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                          std::string(line) + "'");
      }
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

// An empty `path` skips the file. Unspecified fields keep their value in
// `base`, which defaults to the full-scale setup.
inline ExperimentConfig parse_config(const std::string& path,
                                     const std::vector<std::string>& overrides,
                                     ExperimentConfig base = {}) {
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(base, text.str());
  }
  for (const auto& o : overrides) apply_override(base, o);
  base.validate();
  return base;
}

}  // namespace exploitsim
