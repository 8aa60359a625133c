#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ot {

/// Portable generator: the 64-bit Mersenne Twister (std::mt19937_64, whose
/// output sequence is fixed by the C++ standard) with all distributions
/// implemented here rather than taken from <random>, whose algorithms are
/// implementation-defined. Same seed, same stream, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform in {0, ..., n-1}; n > 0.
    std::size_t index(std::size_t n);
    /// Fisher-Yates shuffle of the identity.
    std::vector<std::size_t> permutation(std::size_t n);
    /// Standard normal via Box-Muller (cosine branch only).
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Seed for instance `index` of a batch; batches are reproducible regardless
/// of how instances are scheduled across threads.
inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) { return seed + index; }

}  // namespace ot
