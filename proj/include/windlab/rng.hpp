#pragma once

#include <cstdint>
#include <random>

namespace windlab {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent sub-streams of one replica.
enum class Stream : std::uint64_t {
  noise = 1,
  path = 2,
  increments = 3,
  boundary = 4,
  bridge = 5,
};

/// Counter-based seed derivation: the seed of replica i depends only on
/// (master, i), never on how many replicas ran before it.
inline constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(0x5851f42d4c957f2dULL + replica));
}

inline constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream stream) noexcept {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
}

inline Rng make_rng(std::uint64_t seed, Stream stream) { return Rng(stream_seed(seed, stream)); }

/// Uniform on [0, 1) with 53 random bits; fully specified, unlike
/// std::uniform_real_distribution.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace windlab
