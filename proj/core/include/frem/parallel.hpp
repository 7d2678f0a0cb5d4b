#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace frem {

//! Worker count from FREM_WORKERS, falling back to 1.
std::size_t default_workers();

//! Runs body(i) for i in [0, count) on up to `workers` threads. Each index
//! must write only to its own output slot. If any body throws, the
//! exception of the lowest failing index is rethrown after all threads join.
void parallel_for(std::size_t count,
                  std::size_t workers,
                  const std::function<void(std::size_t)>& body);

//! splitmix64 finalizer over (seed, stream); used for every derived seed so
//! results do not depend on scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

using Rng = std::mt19937_64;

inline Rng
make_rng(std::uint64_t seed, std::uint64_t stream)
{
  return Rng(mix_seed(seed, stream));
}

} // namespace frem
