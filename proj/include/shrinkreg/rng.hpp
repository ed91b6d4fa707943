#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace shrinkreg {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; also used to chain stream keys.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent stream identified by (seed, keys...). The same
/// keys always give the same stream, whatever thread evaluates it.
std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

inline Engine make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Engine(stream_seed(seed, keys));
}

/// Uniform integer in [0, bound) by rejection, independent of the standard
/// library's distribution implementation.
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> random_permutation(Engine& engine, std::size_t n);

}  // namespace shrinkreg
