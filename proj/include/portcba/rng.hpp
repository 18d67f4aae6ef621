#pragma once

#include <cstdint>

namespace portcba::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Steele/Lea/Flood via Vigna).
constexpr std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Fold one key word into a state, fully mixed. Chained calls hash a tuple.
constexpr std::uint64_t derive(std::uint64_t state, std::uint64_t word) {
  return mix(state + kGolden + word);
}

// 53-bit mantissa in [0,1).
constexpr double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// One substream per purpose. Draws are keyed, not sequential, so consuming a
// draw in one stream never shifts any other stream: the same (seed, stream,
// index) always yields the same value. That is what keeps a run with service
// times aligned with a run without them (common random numbers across modes).
enum class Stream : std::uint64_t {
  arrival = 1,
  thinning = 2,
  positivity = 3,
  selection = 4,
  detection = 5,
  service = 6,
};

struct DrawKit {
  std::uint64_t seed = 0;

  constexpr std::uint64_t bits(Stream s, std::uint64_t i, std::uint64_t j = 0) const {
    return derive(derive(derive(seed, static_cast<std::uint64_t>(s)), i), j);
  }
  constexpr double u(Stream s, std::uint64_t i, std::uint64_t j = 0) const {
    return to_unit(bits(s, i, j));
  }
};

// Seed for replication r of stochastic cell (tg_index, cg_index) under a
// method. The search-growth option is deliberately absent: all options of a
// comparison row face the same traffic, positives and routing draws, so
// option differences are not buried in sampling noise.
constexpr std::uint64_t replication_seed(std::uint64_t root, std::uint64_t method,
                                         std::uint64_t tg_index, std::uint64_t cg_index,
                                         std::uint64_t rep) {
  std::uint64_t h = derive(root, method);
  h = derive(h, tg_index);
  h = derive(h, cg_index);
  return derive(h, rep);
}

}  // namespace portcba::rng
