#pragma once

// Random users, daily video pools, watch outcomes and grounded revelations.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "exploitsim/model.hpp"
#include "exploitsim/random.hpp"

namespace exploitsim {

struct EnvConfig {
  std::size_t videos_per_day = 1000;
  std::size_t days = 50;
  std::size_t timeline_segments = 1;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (videos_per_day < 1) throw std::invalid_argument("videos_per_day must be >= 1");
    if (days < 1) throw std::invalid_argument("days must be >= 1");
    if (timeline_segments < 1) throw std::invalid_argument("timeline_segments must be >= 1");
  }

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

struct DailyPool {
  std::vector<VideoProfile> videos;
  std::size_t day_index = 0;
};

// One true coordinate of the user: index 0-4 is preference, 5-9 irrationality.
struct Revelation {
  std::size_t feature_index = 0;
  double value = 0.0;

  friend bool operator==(const Revelation&, const Revelation&) = default;
};

// All ten components i.i.d. uniform, drawn in feature-index order.
template <UniformSource S>
UserProfile sample_user(S& stream) {
  UserProfile u;
  for (std::size_t f = 0; f < kNumFeatures; ++f) component(u, f) = stream.uniform();
  return u;
}

// Each video is the average of `timeline_segments` uniformly random segments.
template <UniformSource S>
DailyPool sample_daily_pool(S& stream, const EnvConfig& cfg, std::size_t day) {
  DailyPool pool;
  pool.day_index = day;
  pool.videos.reserve(cfg.videos_per_day);
  std::vector<VideoTimeline::Segment> segments(cfg.timeline_segments);
  for (std::size_t v = 0; v < cfg.videos_per_day; ++v) {
    for (auto& seg : segments) {
      for (double& x : seg) x = stream.uniform();
    }
    pool.videos.push_back(average_timeline(VideoTimeline(segments)));
  }
  return pool;
}

// Bernoulli(watch_probability). A probability of exactly 1 always yields a
// watch because uniform draws are < 1.
template <UniformSource S>
Outcome simulate_outcome(S& stream, const UserProfile& user, const VideoProfile& video) {
  const double u = stream.uniform();
  return Outcome{u < watch_probability(user, video)};
}

template <UniformSource S>
Revelation reveal_feature(S& stream, const UserProfile& user) {
  const auto raw = static_cast<std::size_t>(stream.uniform() * static_cast<double>(kNumFeatures));
  const std::size_t index = raw < kNumFeatures ? raw : kNumFeatures - 1;
  return Revelation{index, component(user, index)};
}

}  // namespace exploitsim
