#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dynperc {

// SplitMix64 finalizer. Used only to derive independent seeds; the streams
// themselves are std::mt19937_64.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of replica `index` under `master`. Stable across releases: external
/// tools reproduce a single replica with splitmix64(master ^ splitmix64(index)).
constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

/// Seed of the named stream `tag` under `seed` (e.g. "edges", "times", "pairs").
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::string_view tag) noexcept {
  return splitmix64(seed ^ fnv1a(tag));
}

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t seed, std::string_view tag) {
  return Engine(stream_seed(seed, tag));
}

}  // namespace dynperc
