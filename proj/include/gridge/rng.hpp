#pragma once

#include <cstdint>
#include <random>

namespace gridge {

// splitmix64 finalizer; used to derive independent-looking streams from
// (seed, stream) pairs so replicates can run in any order or in parallel
// without changing results.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ (stream + 0x632be59bd9b4e019ULL)));
}

}  // namespace gridge
