#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace mrepi {

/// Engine used for every random draw in the library. Its output sequence is
/// fixed by the C++ standard, so results are reproducible across platforms.
using Engine = std::mt19937_64;

inline constexpr std::string_view kRngName = "mt19937_64";

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed split: the seed of stream `counter` under `master`.
/// Depends only on its arguments, never on the order in which it is called.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(counter + 0xD1B54A32D192ED03ULL));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Uniform double in [0, 1) built from the top 53 bits. Unlike
/// std::uniform_real_distribution this is bit-identical across standard libraries.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

/// Fisher-Yates shuffle driven by uniform_below (std::shuffle is not portable).
template <typename RandomIt>
void portable_shuffle(RandomIt first, RandomIt last, Engine& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_below(rng, i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace mrepi
