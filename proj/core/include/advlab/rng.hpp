#pragma once

#include <cstdint>
#include <random>

namespace advlab {

/// splitmix64 mixing step; used to derive independent stream seeds from a
/// master seed so results do not depend on execution order or thread count.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream` under `master`. Distinct streams are
/// statistically independent for any fixed master seed.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream);

/// Engine keyed by (master seed, stream id).
std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream = 0);

}  // namespace advlab
