#pragma once

// Core value types and closed-form formulas of the recommendation model.
//
// A user and a video are each described by ten features in [0,1]: five
// preference features and five irrationality ("trick") features. Distances
// are always carried around squared, since nothing downstream needs the root.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace exploitsim {

inline constexpr std::size_t kBlockSize = 5;
inline constexpr std::size_t kNumFeatures = 2 * kBlockSize;

// Five components in [0,1]. Construction through `checked` validates the
// range; the aggregate form is unchecked and meant for hot loops.
struct FeatureVec5 {
  std::array<double, kBlockSize> values{};

  static FeatureVec5 checked(const std::array<double, kBlockSize>& v) {
    for (double x : v) {
      if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("feature component out of [0,1]: " +
                                    std::to_string(x));
      }
    }
    return FeatureVec5{v};
  }

  static constexpr FeatureVec5 filled(double x) {
    FeatureVec5 f;
    f.values.fill(x);
    return f;
  }

  constexpr double operator[](std::size_t i) const { return values[i]; }
  constexpr double& operator[](std::size_t i) { return values[i]; }

  friend constexpr bool operator==(const FeatureVec5&, const FeatureVec5&) = default;
};

struct UserProfile {
  FeatureVec5 pref;  // h_R
  FeatureVec5 irr;   // h_p

  friend constexpr bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct VideoProfile {
  FeatureVec5 pref;  // v_R
  FeatureVec5 irr;   // v_p

  friend constexpr bool operator==(const VideoProfile&, const VideoProfile&) = default;
};

// Flat feature index: 0-4 address the preference block, 5-9 the irrationality block.
template <typename Profile>
constexpr double component(const Profile& p, std::size_t index) {
  return index < kBlockSize ? p.pref[index] : p.irr[index - kBlockSize];
}

template <typename Profile>
constexpr double& component(Profile& p, std::size_t index) {
  return index < kBlockSize ? p.pref[index] : p.irr[index - kBlockSize];
}

// Exchanges the preference and irrationality blocks.
template <typename Profile>
constexpr Profile swap_blocks(const Profile& p) {
  return Profile{p.irr, p.pref};
}

struct Outcome {
  bool watched_full = false;

  friend constexpr bool operator==(const Outcome&, const Outcome&) = default;
};

// Per-segment feature importance over the course of a video. Each entry
// holds the five preference features followed by the five irrationality
// features.
class VideoTimeline {
 public:
  using Segment = std::array<double, kNumFeatures>;

  explicit VideoTimeline(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
      throw std::invalid_argument("video timeline needs at least one segment");
    }
    for (const auto& s : segments_) {
      for (double x : s) {
        if (!(x >= 0.0 && x <= 1.0)) {
          throw std::invalid_argument("timeline entry out of [0,1]: " + std::to_string(x));
        }
      }
    }
  }

  std::span<const Segment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

 private:
  std::vector<Segment> segments_;
};

inline double distance_sq(const FeatureVec5& a, const FeatureVec5& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kBlockSize; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// exp(-dR^2 - dp^2). Written as exp(-(dR^2 + dp^2)) so that swapping the two
// blocks of both arguments gives a bit-identical result.
inline double watch_probability_from(double delta_r_sq, double delta_p_sq) {
  return std::exp(-(delta_r_sq + delta_p_sq));
}

inline double watch_probability(const UserProfile& user, const VideoProfile& video) {
  return watch_probability_from(distance_sq(user.pref, video.pref),
                                distance_sq(user.irr, video.irr));
}

inline constexpr double kWatchBaseReward = 10.0;
inline constexpr double kMismatchPenalty = 100.0;

// Human utility of a recommendation, measured against the opportunity cost of
// doing something else (normalized to 0). Only the preference block matters.
inline double human_reward_from(double delta_r_sq, Outcome outcome) {
  return outcome.watched_full ? kWatchBaseReward - kMismatchPenalty * delta_r_sq : 0.0;
}

inline double human_reward(const UserProfile& user, const VideoProfile& video, Outcome outcome) {
  return human_reward_from(distance_sq(user.pref, video.pref), outcome);
}

inline VideoProfile average_timeline(const VideoTimeline& timeline) {
  VideoTimeline::Segment sum{};
  for (const auto& seg : timeline.segments()) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) sum[f] += seg[f];
  }
  const double n = static_cast<double>(timeline.size());
  VideoProfile v;
  for (std::size_t f = 0; f < kNumFeatures; ++f) component(v, f) = sum[f] / n;
  return v;
}

}  // namespace exploitsim
