#pragma once

#include <cstdint>
#include <random>

namespace graphfuse {

using Rng = std::mt19937_64;

// Deterministic child seed for (master, stream, substream); SplitMix64
// finalizer applied to each component so nearby indices decorrelate.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0);

}  // namespace graphfuse
