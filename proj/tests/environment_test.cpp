#include <gtest/gtest.h>

#include <array>

#include "exploitsim/environment.hpp"
#include "exploitsim/simulator.hpp"
#include "test_util.hpp"

namespace exploitsim {
namespace {

TEST(SampleUser, PassesDrawsThrough) {
  testutil::ScriptedStream s{std::vector<double>(10, 0.5)};
  const UserProfile u = sample_user(s);
  for (std::size_t f = 0; f < kNumFeatures; ++f) EXPECT_EQ(component(u, f), 0.5);
  EXPECT_EQ(s.next, 10u);
}

TEST(SampleUser, SameStreamStateSameProfile) {
  RandomStream a(42);
  RandomStream b = a;
  EXPECT_EQ(sample_user(a), sample_user(b));
}

TEST(SampleUser, ComponentMeansAreUniform) {
  RandomStream s(1);
  std::array<double, kNumFeatures> sum{};
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    const UserProfile u = sample_user(s);
    for (std::size_t f = 0; f < kNumFeatures; ++f) sum[f] += component(u, f);
  }
  for (double x : sum) EXPECT_NEAR(x / kN, 0.5, 0.01);
}

double component_variance(std::size_t segments) {
  EnvConfig cfg;
  cfg.videos_per_day = 100000;
  cfg.timeline_segments = segments;
  RandomStream s(7 + segments);
  const DailyPool pool = sample_daily_pool(s, cfg, 0);
  double sum = 0, sum_sq = 0;
  for (const auto& v : pool.videos) {
    sum += v.pref[0];
    sum_sq += v.pref[0] * v.pref[0];
  }
  const double n = static_cast<double>(pool.videos.size());
  const double mean = sum / n;
  return sum_sq / n - mean * mean;
}

TEST(SampleDailyPool, Sizes) {
  EnvConfig cfg;
  cfg.videos_per_day = 1;
  RandomStream s(3);
  const DailyPool pool = sample_daily_pool(s, cfg, 4);
  EXPECT_EQ(pool.videos.size(), 1u);
  EXPECT_EQ(pool.day_index, 4u);
}

TEST(SampleDailyPool, SingleSegmentVarianceIsUniform) {
  EXPECT_NEAR(component_variance(1), 1.0 / 12.0, 0.005);
}

TEST(SampleDailyPool, FourSegmentVarianceShrinks) {
  EXPECT_NEAR(component_variance(4), 1.0 / 48.0, 0.003);
}

TEST(SampleDailyPool, ValuesInUnitInterval) {
  EnvConfig cfg;
  cfg.videos_per_day = 2000;
  cfg.timeline_segments = 3;
  RandomStream s(5);
  for (const auto& v : sample_daily_pool(s, cfg, 0).videos) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      EXPECT_GE(component(v, f), 0.0);
      EXPECT_LE(component(v, f), 1.0);
    }
  }
}

TEST(SimulateOutcome, PerfectMatchAlwaysWatched) {
  RandomStream s(9);
  const UserProfile u{FeatureVec5::filled(0.3), FeatureVec5::filled(0.6)};
  const VideoProfile v{u.pref, u.irr};
  for (int i = 0; i < 10000; ++i) EXPECT_TRUE(simulate_outcome(s, u, v).watched_full);
  testutil::ScriptedStream worst{{0.9999999999999999}};
  EXPECT_TRUE(simulate_outcome(worst, u, v).watched_full);
}

double watch_frequency(const VideoProfile& v, std::uint64_t seed) {
  const UserProfile zero{FeatureVec5::filled(0.0), FeatureVec5::filled(0.0)};
  RandomStream s(seed);
  constexpr int kN = 1000000;
  int hits = 0;
  for (int i = 0; i < kN; ++i) hits += simulate_outcome(s, zero, v).watched_full ? 1 : 0;
  return static_cast<double>(hits) / kN;
}

TEST(SimulateOutcome, FrequencyMatchesClosedForm) {
  EXPECT_NEAR(watch_frequency({FeatureVec5::filled(1.0), FeatureVec5::filled(1.0)}, 21),
              4.54e-5, 5e-5);
  EXPECT_NEAR(watch_frequency({FeatureVec5::filled(0.0), FeatureVec5{{0.5, 0, 0, 0, 0}}}, 22),
              0.7788, 0.002);
}

TEST(RevealFeature, ConstantProfile) {
  RandomStream s(2);
  const UserProfile u{FeatureVec5::filled(0.7), FeatureVec5::filled(0.7)};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(reveal_feature(s, u).value, 0.7);
}

TEST(RevealFeature, UniformIndexAndTruthful) {
  RandomStream s(8);
  RandomStream us(81);
  const UserProfile u = sample_user(us);
  std::array<int, kNumFeatures> counts{};
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    const Revelation r = reveal_feature(s, u);
    ASSERT_LT(r.feature_index, kNumFeatures);
    EXPECT_EQ(r.value, component(u, r.feature_index));
    ++counts[r.feature_index];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / kN, 0.1, 0.005);
}

TEST(RevealFeature, TopDrawMapsToLastIndex) {
  testutil::ScriptedStream s{{0.9999999999999999, 0.0}};
  const UserProfile u{FeatureVec5::filled(0.1), FeatureVec5::filled(0.9)};
  EXPECT_EQ(reveal_feature(s, u).feature_index, 9u);
  EXPECT_EQ(reveal_feature(s, u).feature_index, 0u);
}

TEST(Streams, KeyedDerivationIsDeterministicAndDistinct) {
  EnvConfig env;
  env.videos_per_day = 50;
  env.master_seed = 99;
  const DailyPool a = pool_for(env, 3, 7);
  const DailyPool b = pool_for(env, 3, 7);
  ASSERT_EQ(a.videos.size(), b.videos.size());
  for (std::size_t i = 0; i < a.videos.size(); ++i) EXPECT_EQ(a.videos[i], b.videos[i]);
  EXPECT_NE(pool_for(env, 3, 8).videos[0], a.videos[0]);
  EXPECT_NE(pool_for(env, 4, 7).videos[0], a.videos[0]);
  EXPECT_EQ(user_for(99, 5), user_for(99, 5));
  EXPECT_NE(user_for(99, 5), user_for(99, 6));
  EXPECT_NE(user_for(99, 5), user_for(100, 5));
}

TEST(EnvConfig, Validation) {
  EnvConfig c;
  EXPECT_NO_THROW(c.validate());
  c.videos_per_day = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.days = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.timeline_segments = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace exploitsim
