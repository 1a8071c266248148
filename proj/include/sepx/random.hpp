#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sepx {

using Rng = std::mt19937_64;

// Seed used when neither a flag nor the environment provides one.
inline constexpr std::uint64_t kDefaultSeed = 20230127;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Mixes a master seed with a list of tags into an independent substream seed.
// Distinct tag lists give statistically unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(derive_seed(master, tags));
}

// Stable tags for named substreams.
namespace stream {
inline constexpr std::uint64_t kInit = 0x696e6974;
inline constexpr std::uint64_t kSelect = 0x73656c;
inline constexpr std::uint64_t kVary = 0x76617279;
inline constexpr std::uint64_t kNoise = 0x6e6f6973;
inline constexpr std::uint64_t kRun = 0x72756e;
inline constexpr std::uint64_t kCell = 0x63656c6c;
}  // namespace stream

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace sepx
