#include "ydss/rng.hpp"

namespace ydss {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

XorShift64Star::XorShift64Star(std::uint64_t seed) : state_(splitmix64(seed))
{
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t XorShift64Star::next()
{
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
}

double XorShift64Star::uniform()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t XorShift64Star::below(std::uint64_t n)
{
    return ((next() >> 32) * n) >> 32;
}

std::size_t XorShift64Star::categorical(std::span<const double> probs)
{
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return k;
    }
    return probs.empty() ? 0 : probs.size() - 1;
}

} // namespace ydss
