#pragma once

// Episode runner and cohort experiment.
//
// One episode is one user facing one agent kind for `days` days. Randomness
// is keyed so that every agent kind sees the same user, the same daily pools
// and the same per-day outcome uniforms (common random numbers); only the
// grounded agent's revelations have a stream of their own.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "exploitsim/agents.hpp"
#include "exploitsim/environment.hpp"
#include "exploitsim/model.hpp"
#include "exploitsim/random.hpp"

namespace exploitsim {

struct EpisodeRecord {
  std::size_t day = 0;  // 1-based
  std::size_t chosen_index = 0;
  bool watched_full = false;
  int agent_reward = 0;
  double human_reward = 0.0;
  double delta_r_sq = 0.0;
  double delta_p_sq = 0.0;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct ExperimentConfig {
  EnvConfig env;
  std::size_t num_users = 150;
  std::size_t particles = 1000;
  std::vector<AgentKind> agent_kinds = {AgentKind::kIgnorant, AgentKind::kKnowsPreferences,
                                        AgentKind::kKnowsIrrationalities, AgentKind::kOmniscient,
                                        AgentKind::kAligned};
  std::size_t smoothing_window = 1;
  std::string scenario_name = "custom";
  bool regenerate_particles_daily = false;
  bool aligned_expected_utility = false;

  void validate() const {
    env.validate();
    if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
    if (particles < 1) throw std::invalid_argument("particles must be >= 1");
    if (agent_kinds.empty()) throw std::invalid_argument("agent_kinds must not be empty");
    if (smoothing_window < 1) throw std::invalid_argument("smoothing_window must be >= 1");
  }

  AgentOptions agent_options() const {
    return AgentOptions{particles, regenerate_particles_daily, aligned_expected_utility};
  }
};

struct SeriesPoint {
  std::size_t day = 0;
  AgentKind agent = AgentKind::kIgnorant;
  double mean_watch_rate = 0.0;
  double se_watch_rate = 0.0;
  double mean_human_reward = 0.0;
  double se_human_reward = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

// Seed keys ----------------------------------------------------------------

inline UserProfile user_for(std::uint64_t master_seed, std::size_t user_index) {
  RandomStream s = RandomStream::derive(master_seed, Purpose::kUser, {user_index});
  return sample_user(s);
}

// `day` is 0-based.
inline DailyPool pool_for(const EnvConfig& env, std::size_t user_index, std::size_t day) {
  RandomStream s = RandomStream::derive(env.master_seed, Purpose::kPool, {user_index, day});
  return sample_daily_pool(s, env, day);
}

inline std::uint64_t particle_seed_for(std::uint64_t master_seed, std::size_t user_index) {
  return mix_seed(master_seed, {static_cast<std::uint64_t>(Purpose::kParticles), user_index});
}

inline RandomStream outcome_stream_for(std::uint64_t master_seed, std::size_t user_index) {
  return RandomStream::derive(master_seed, Purpose::kOutcome, {user_index});
}

inline RandomStream reveal_stream_for(std::uint64_t master_seed, std::size_t user_index,
                                      AgentKind kind) {
  return RandomStream::derive(master_seed, Purpose::kReveal,
                              {user_index, static_cast<std::uint64_t>(kind)});
}

// Episodes ------------------------------------------------------------------

// Runs one episode against an arbitrary pool source (`pools(day)` with 0-based
// day). Exposed separately so tests can drive mirrored or hand-built worlds.
template <typename PoolSource, UniformSource OutcomeStream, UniformSource RevealStream>
std::vector<EpisodeRecord> run_episode(AgentState agent, const UserProfile& user,
                                       std::size_t days, PoolSource&& pools,
                                       OutcomeStream& outcomes, RevealStream& reveals) {
  std::vector<EpisodeRecord> records;
  records.reserve(days);
  for (std::size_t d = 0; d < days; ++d) {
    const DailyPool pool = pools(d);
    const std::size_t chosen = select_video(agent, pool);
    const VideoProfile& video = pool.videos[chosen];
    const Outcome outcome = simulate_outcome(outcomes, user, video);

    EpisodeRecord r;
    r.day = d + 1;
    r.chosen_index = chosen;
    r.watched_full = outcome.watched_full;
    r.agent_reward = outcome.watched_full ? 1 : 0;
    r.delta_r_sq = distance_sq(user.pref, video.pref);
    r.delta_p_sq = distance_sq(user.irr, video.irr);
    r.human_reward = human_reward_from(r.delta_r_sq, outcome);
    records.push_back(r);

    std::optional<Revelation> revelation;
    if (agent.kind == AgentKind::kGrounded && !outcome.watched_full) {
      revelation = reveal_feature(reveals, user);
    }
    observe(agent, video, outcome, revelation);
  }
  return records;
}

inline std::vector<EpisodeRecord> run_user_episode(std::size_t user_index, AgentKind kind,
                                                   const ExperimentConfig& cfg) {
  const std::uint64_t seed = cfg.env.master_seed;
  const UserProfile user = user_for(seed, user_index);
  AgentState agent =
      make_agent(kind, user, particle_seed_for(seed, user_index), cfg.agent_options());
  RandomStream outcomes = outcome_stream_for(seed, user_index);
  RandomStream reveals = reveal_stream_for(seed, user_index, kind);
  return run_episode(
      std::move(agent), user, cfg.env.days,
      [&](std::size_t d) { return pool_for(cfg.env, user_index, d); }, outcomes, reveals);
}

// Cohort ----------------------------------------------------------------------

inline std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

inline void mean_and_se(const std::vector<double>& xs, double& mean, double& se) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  if (xs.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace detail

// Callback invoked after each finished episode with (done, total). Called
// from worker threads, serialized by an internal mutex.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

// Points are ordered by agent (in config order), then day. The result does
// not depend on `threads`: every episode writes its own slot and the
// reduction walks slots in key order.
inline std::vector<SeriesPoint> run_experiment(const ExperimentConfig& cfg, std::size_t threads = 1,
                                               const ProgressFn& progress = {}) {
  cfg.validate();
  const std::size_t kinds = cfg.agent_kinds.size();
  const std::size_t total = cfg.num_users * kinds;
  std::vector<std::vector<EpisodeRecord>> slots(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      try {
        const std::size_t user = job / kinds;
        const AgentKind kind = cfg.agent_kinds[job % kinds];
        slots[job] = run_user_episode(user, kind, cfg);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = total;
        return;
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(mu);
        progress(finished, total);
      }
    }
  };

  const std::size_t n_workers = std::min(resolve_threads(threads), total);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SeriesPoint> points;
  points.reserve(kinds * cfg.env.days);
  std::vector<double> watch(cfg.num_users), reward(cfg.num_users);
  for (std::size_t k = 0; k < kinds; ++k) {
    for (std::size_t d = 0; d < cfg.env.days; ++d) {
      for (std::size_t u = 0; u < cfg.num_users; ++u) {
        const EpisodeRecord& r = slots[u * kinds + k][d];
        watch[u] = r.agent_reward;
        reward[u] = r.human_reward;
      }
      SeriesPoint p;
      p.day = d + 1;
      p.agent = cfg.agent_kinds[k];
      detail::mean_and_se(watch, p.mean_watch_rate, p.se_watch_rate);
      detail::mean_and_se(reward, p.mean_human_reward, p.se_human_reward);
      points.push_back(p);
    }
  }
  return points;
}

// Trailing moving average over at most `window` days (current day included),
// applied per agent to every mean and standard-error column.
inline std::vector<SeriesPoint> smooth_series(const std::vector<SeriesPoint>& points,
                                              std::size_t window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  if (window == 1) return points;

  std::vector<SeriesPoint> out = points;
  for (std::size_t i = 0; i < points.size(); ++i) {
    SeriesPoint acc{};
    std::size_t count = 0;
    for (std::size_t j = i + 1; j-- > 0 && count < window;) {
      if (points[j].agent != points[i].agent) continue;
      acc.mean_watch_rate += points[j].mean_watch_rate;
      acc.se_watch_rate += points[j].se_watch_rate;
      acc.mean_human_reward += points[j].mean_human_reward;
      acc.se_human_reward += points[j].se_human_reward;
      ++count;
    }
    const double n = static_cast<double>(count);
    out[i].mean_watch_rate = acc.mean_watch_rate / n;
    out[i].se_watch_rate = acc.se_watch_rate / n;
    out[i].mean_human_reward = acc.mean_human_reward / n;
    out[i].se_human_reward = acc.se_human_reward / n;
  }
  return out;
}

// Points for one agent, in day order.
inline std::vector<SeriesPoint> series_for(const std::vector<SeriesPoint>& points, AgentKind kind) {
  std::vector<SeriesPoint> out;
  for (const auto& p : points) {
    if (p.agent == kind) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.day < b.day; });
  return out;
}

}  // namespace exploitsim
