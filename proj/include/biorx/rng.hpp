#pragma once

#include <cstdint>
#include <random>

namespace biorx {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for trial `trial` of sweep point `point`:
///   splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial)
/// Each level is a bijection, so distinct (point, trial) pairs under one master
/// seed never collide at a level, and streams do not depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                    std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial);
}

}  // namespace biorx
