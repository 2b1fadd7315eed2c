#pragma once

#include <cstdint>
#include <random>

#include "gmfuse/types.hpp"

namespace gmfuse {

/// Deterministic random source with a fully specified algorithm, so that
/// runs are reproducible across platforms and reimplementable in other
/// languages:
///
///   engine   std::mt19937_64 seeded directly with the 64-bit seed
///   uniform  (engine() >> 11) * 2^-53, giving a double in [0, 1)
///   normal   Box-Muller: each draw consumes exactly two uniforms u1, u2
///            and returns sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform();

    /// Standard normal draw.
    double normal();

    /// Vector of independent standard normal draws.
    Vec normal_vector(int n);

    /// Derives an independent stream seed from a base seed, used to give
    /// each consumer (truth propagation, each sensor, each particle cloud)
    /// its own generator. splitmix64 finalizer over seed + stream.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 engine_;
};

}  // namespace gmfuse
