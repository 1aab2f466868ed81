#pragma once

// Seeded, order-independent random streams. Every Monte Carlo chunk or slot
// draws from its own engine derived from (seed, stream, substream), so
// results do not depend on how work is split across threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace nocsit::rng {

using Engine = std::mt19937_64;

/// splitmix64 finalizer over the combined words.
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

Engine derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Callers write results into per-index slots and reduce in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace nocsit::rng
