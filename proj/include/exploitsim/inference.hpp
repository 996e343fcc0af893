#pragma once

// Monte-Carlo posterior over the hidden user.
//
// A fixed cloud of candidate users is drawn from the prior (uniform on every
// coordinate the agent does not know) and reweighted in log space after each
// observed watch / no-watch. Revealed coordinates are clamped in place.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exploitsim/environment.hpp"
#include "exploitsim/model.hpp"
#include "exploitsim/random.hpp"

namespace exploitsim {

struct KnowledgeSpec {
  bool known_preferences = false;
  bool known_irrationalities = false;
  std::map<std::size_t, double> revealed;

  bool knows(std::size_t feature) const {
    if (feature < kBlockSize ? known_preferences : known_irrationalities) return true;
    return revealed.contains(feature);
  }

  void validate() const {
    for (const auto& [index, value] : revealed) {
      if (index >= kNumFeatures) {
        throw std::invalid_argument("revealed feature index out of range: " +
                                    std::to_string(index));
      }
      if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("revealed value out of [0,1]: " + std::to_string(value));
      }
    }
  }

  // Exchanges which block is known, and moves revealed indices across blocks.
  KnowledgeSpec mirrored() const {
    KnowledgeSpec m{known_irrationalities, known_preferences, {}};
    for (const auto& [index, value] : revealed) m.revealed[(index + kBlockSize) % kNumFeatures] = value;
    return m;
  }
};

struct Particle {
  UserProfile profile;
  double log_weight = 0.0;  // -inf marks an eliminated particle

  bool live() const { return log_weight > -std::numeric_limits<double>::infinity(); }
};

struct ParticleSet {
  std::vector<Particle> particles;
  KnowledgeSpec knowledge;
  // Number of times every particle was eliminated and weights were reset.
  std::size_t degenerate_resets = 0;

  double max_log_weight() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : particles) best = std::max(best, p.log_weight);
    return best;
  }
};

// Draws only the coordinates the agent does not know, particle by particle in
// feature-index order; known and revealed coordinates are copied from `truth`.
template <UniformSource S>
ParticleSet init_particles(const KnowledgeSpec& knowledge, const UserProfile& truth, S& stream,
                           std::size_t n) {
  if (n < 1) throw std::invalid_argument("particle count must be >= 1");
  knowledge.validate();
  for (const auto& [index, value] : knowledge.revealed) {
    if (value != component(truth, index)) {
      throw std::invalid_argument("revealed value disagrees with the true profile at feature " +
                                  std::to_string(index));
    }
  }

  ParticleSet ps;
  ps.knowledge = knowledge;
  ps.particles.resize(n);
  for (auto& particle : ps.particles) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      component(particle.profile, f) =
          knowledge.knows(f) ? component(truth, f) : stream.uniform();
    }
  }
  return ps;
}

// Log-likelihood of one observation under a candidate profile.
inline double observation_log_likelihood(const UserProfile& candidate, const VideoProfile& video,
                                         Outcome outcome) {
  const double q = watch_probability(candidate, video);
  return outcome.watched_full ? std::log(q) : std::log1p(-q);
}

inline void update_weights(ParticleSet& ps, const VideoProfile& video, Outcome outcome) {
  bool any_live = false;
  for (auto& p : ps.particles) {
    if (!p.live()) continue;
    p.log_weight += observation_log_likelihood(p.profile, video, outcome);
    any_live = any_live || p.live();
  }
  if (!any_live) {
    for (auto& p : ps.particles) p.log_weight = 0.0;
    ++ps.degenerate_resets;
  }
}

inline void apply_revelation(ParticleSet& ps, const Revelation& rev) {
  if (rev.feature_index >= kNumFeatures) {
    throw std::invalid_argument("revelation index out of range: " +
                                std::to_string(rev.feature_index));
  }
  if (!(rev.value >= 0.0 && rev.value <= 1.0)) {
    throw std::invalid_argument("revelation value out of [0,1]: " + std::to_string(rev.value));
  }
  for (auto& p : ps.particles) component(p.profile, rev.feature_index) = rev.value;
  ps.knowledge.revealed[rev.feature_index] = rev.value;
}

// exp(log_weight - max) per particle; zero for eliminated or underflowed ones.
inline std::vector<double> shifted_weights(const ParticleSet& ps) {
  const double shift = ps.max_log_weight();
  if (!(shift > -std::numeric_limits<double>::infinity())) {
    throw std::logic_error("particle set has no live particle");
  }
  std::vector<double> w(ps.particles.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(ps.particles[i].log_weight - shift);
  return w;
}

// Unnormalized posterior-mean watch probability for every video in `videos`.
// Scores are comparable only within one particle-set state. Zero-weight
// particles are skipped; they would contribute exactly +0.
inline std::vector<double> estimate_watch_probabilities(const ParticleSet& ps,
                                                        std::span<const VideoProfile> videos) {
  const std::vector<double> w = shifted_weights(ps);
  std::vector<double> scores(videos.size(), 0.0);
  for (std::size_t i = 0; i < ps.particles.size(); ++i) {
    if (w[i] == 0.0) continue;
    const UserProfile& cand = ps.particles[i].profile;
    for (std::size_t j = 0; j < videos.size(); ++j) {
      scores[j] += w[i] * watch_probability(cand, videos[j]);
    }
  }
  return scores;
}

inline double estimate_watch_probability(const ParticleSet& ps, const VideoProfile& video) {
  return estimate_watch_probabilities(ps, std::span<const VideoProfile>(&video, 1)).front();
}

}  // namespace exploitsim
