#pragma once

#include <cstdint>
#include <span>

namespace ydss {

/// xorshift64* generator (Vigna 2016): shifts 12, 25, 27 and output
/// multiplier 0x2545F4914F6CDD1D. The user seed is passed once through
/// splitmix64 (increment 0x9E3779B97F4A7C15) so that seed 0 is usable.
///
/// All derived draws are defined here rather than through <random>
/// distributions, whose algorithms are implementation-defined.
class XorShift64Star {
public:
    explicit XorShift64Star(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform on [0, 1) with 53 random bits: (next() >> 11) * 2^-53.
    double uniform();
    /// Uniform integer in [0, n) by multiply-shift of the top 32 bits; n < 2^32.
    std::uint64_t below(std::uint64_t n);
    /// Inverse-CDF draw from a probability vector (summing to 1).
    std::size_t categorical(std::span<const double> probs);

private:
    std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace ydss
