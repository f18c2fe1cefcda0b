#pragma once

// Counter-style stream splitting: every (seed, stream) pair gets its own
// engine, so work can be spread over any number of workers and still produce
// the same draws.

#include <cstdint>
#include <random>

namespace jsp {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = Engine::max() - Engine::max() % bound;
  std::uint64_t r;
  do r = eng();
  while (r >= limit);
  return r % bound;
}

// Reserved stream indices that never collide with per-read streams.
inline constexpr std::uint64_t kCalibrationStream = 0xC0FFEE0000000001ull;

}  // namespace jsp
