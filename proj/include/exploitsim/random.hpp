#pragma once

// Seeded random streams.
//
// Every consumer of randomness gets its own substream whose seed is a pure
// function of (master seed, key...). Adding an agent kind or reordering loops
// therefore never perturbs anybody else's draws.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace exploitsim {

// Anything that hands out doubles in [0,1).
template <typename S>
concept UniformSource = requires(S& s) {
  { s.uniform() } -> std::convertible_to<double>;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_seed(std::uint64_t master,
                                        std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : key) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

// What a substream is used for. Values are part of the seed derivation and
// must stay stable.
enum class Purpose : std::uint64_t {
  kUser = 1,
  kPool = 2,
  kParticles = 3,
  kOutcome = 4,
  kReveal = 5,
};

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream derive(std::uint64_t master, Purpose purpose,
                             std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = mix_seed(master, {static_cast<std::uint64_t>(purpose)});
    for (std::uint64_t k : key) h = mix_seed(h, {k});
    return RandomStream(h);
  }

  // 53 random bits scaled into [0,1); identical on every platform, unlike
  // std::uniform_real_distribution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace exploitsim
