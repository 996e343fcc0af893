#pragma once

// The six recommendation policies.
//
// Four of them are greedy Monte-Carlo learners that differ only in which part
// of the user they know up front (nothing, preferences, irrationalities) or
// learn along the way (grounded: one true coordinate per rejection). The
// omniscient and aligned systems read the true profile directly.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exploitsim/environment.hpp"
#include "exploitsim/inference.hpp"
#include "exploitsim/model.hpp"
#include "exploitsim/random.hpp"

namespace exploitsim {

enum class AgentKind : std::uint8_t {
  kIgnorant,
  kKnowsPreferences,
  kKnowsIrrationalities,
  kOmniscient,
  kAligned,
  kGrounded,
};

inline constexpr std::array<AgentKind, 6> kAllAgentKinds = {
    AgentKind::kIgnorant,   AgentKind::kKnowsPreferences, AgentKind::kKnowsIrrationalities,
    AgentKind::kOmniscient, AgentKind::kAligned,          AgentKind::kGrounded,
};

inline constexpr std::string_view agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kIgnorant: return "ignorant";
    case AgentKind::kKnowsPreferences: return "knows_preferences";
    case AgentKind::kKnowsIrrationalities: return "knows_irrationalities";
    case AgentKind::kOmniscient: return "omniscient";
    case AgentKind::kAligned: return "aligned";
    case AgentKind::kGrounded: return "grounded";
  }
  return "unknown";
}

inline std::optional<AgentKind> parse_agent_kind(std::string_view name) {
  for (AgentKind k : kAllAgentKinds) {
    if (agent_name(k) == name) return k;
  }
  return std::nullopt;
}

inline constexpr bool has_posterior(AgentKind kind) {
  return kind != AgentKind::kOmniscient && kind != AgentKind::kAligned;
}

inline KnowledgeSpec initial_knowledge(AgentKind kind) {
  switch (kind) {
    case AgentKind::kKnowsPreferences: return {true, false, {}};
    case AgentKind::kKnowsIrrationalities: return {false, true, {}};
    case AgentKind::kOmniscient: return {true, true, {}};
    default: return {};
  }
}

struct AgentOptions {
  std::size_t particles = 1000;
  // Draw a fresh particle cloud every day and reweight it on the whole
  // history instead of carrying one cloud forward.
  bool regenerate_particles_daily = false;
  // Aligned maximizes expected human reward instead of minimizing the
  // preference distance.
  bool aligned_expected_utility = false;
};

struct Observation {
  VideoProfile video;
  Outcome outcome;
};

struct AgentState {
  AgentKind kind = AgentKind::kIgnorant;
  AgentOptions options;
  UserProfile truth;  // read only by omniscient/aligned selection and particle clamping
  std::optional<ParticleSet> posterior;
  std::uint64_t cumulative_reward = 0;

  std::uint64_t particle_seed = 0;
  std::vector<Observation> history;  // kept only when regenerating daily
};

inline RandomStream particle_stream(std::uint64_t particle_seed, std::size_t generation) {
  return RandomStream::derive(particle_seed, Purpose::kParticles, {generation});
}

// Generation 0 of the particle stream seeds the initial cloud; with daily
// regeneration, generation d seeds the cloud used on day d.
inline AgentState make_agent(AgentKind kind, const UserProfile& truth, std::uint64_t particle_seed,
                             const AgentOptions& options = {}) {
  AgentState agent;
  agent.kind = kind;
  agent.options = options;
  agent.truth = truth;
  agent.particle_seed = particle_seed;
  if (has_posterior(kind)) {
    RandomStream stream = particle_stream(particle_seed, 0);
    agent.posterior = init_particles(initial_knowledge(kind), truth, stream, options.particles);
  }
  return agent;
}

namespace detail {

// First index of the maximum; strict comparison keeps the lowest index on ties.
template <typename Score>
std::size_t argmax_lowest(std::size_t n, Score&& score) {
  std::size_t best = 0;
  double best_score = score(0);
  for (std::size_t j = 1; j < n; ++j) {
    const double s = score(j);
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }
  return best;
}

}  // namespace detail

inline std::size_t select_video(const AgentState& agent, const DailyPool& pool) {
  const auto& videos = pool.videos;
  if (videos.empty()) throw std::invalid_argument("cannot select from an empty pool");

  switch (agent.kind) {
    case AgentKind::kOmniscient:
      return detail::argmax_lowest(videos.size(), [&](std::size_t j) {
        return watch_probability(agent.truth, videos[j]);
      });
    case AgentKind::kAligned:
      if (agent.options.aligned_expected_utility) {
        return detail::argmax_lowest(videos.size(), [&](std::size_t j) {
          const double dr = distance_sq(agent.truth.pref, videos[j].pref);
          const double dp = distance_sq(agent.truth.irr, videos[j].irr);
          return watch_probability_from(dr, dp) * human_reward_from(dr, Outcome{true});
        });
      }
      return detail::argmax_lowest(videos.size(), [&](std::size_t j) {
        return -distance_sq(agent.truth.pref, videos[j].pref);
      });
    default: {
      const std::vector<double> scores = estimate_watch_probabilities(*agent.posterior, videos);
      return detail::argmax_lowest(scores.size(), [&](std::size_t j) { return scores[j]; });
    }
  }
}

inline void observe(AgentState& agent, const VideoProfile& video, Outcome outcome,
                    const std::optional<Revelation>& revelation = std::nullopt) {
  const bool expects_revelation = agent.kind == AgentKind::kGrounded && !outcome.watched_full;
  if (revelation.has_value() != expects_revelation) {
    throw std::invalid_argument(
        std::string("revelation must be supplied exactly when a grounded agent sees a rejection; "
                    "agent=") +
        std::string(agent_name(agent.kind)) + ", watched=" + (outcome.watched_full ? "1" : "0") +
        ", revelation=" + (revelation ? "present" : "absent"));
  }

  if (outcome.watched_full) ++agent.cumulative_reward;
  if (!agent.posterior) return;

  if (!agent.options.regenerate_particles_daily) {
    update_weights(*agent.posterior, video, outcome);
    if (revelation) apply_revelation(*agent.posterior, *revelation);
    return;
  }

  agent.history.push_back({video, outcome});
  KnowledgeSpec knowledge = agent.posterior->knowledge;
  if (revelation) knowledge.revealed[revelation->feature_index] = revelation->value;
  RandomStream stream = particle_stream(agent.particle_seed, agent.history.size());
  ParticleSet fresh = init_particles(knowledge, agent.truth, stream, agent.options.particles);
  fresh.degenerate_resets = agent.posterior->degenerate_resets;
  for (const auto& obs : agent.history) update_weights(fresh, obs.video, obs.outcome);
  agent.posterior = std::move(fresh);
}

}  // namespace exploitsim
