#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace ensvol {

// Seedable 64-bit generator (SplitMix64).  The algorithm is fixed so that
// fuzz failures reproduce bit-exactly across platforms and rebuilds; every
// report that involves randomness echoes the seed it was run with.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

    // The seed this generator was constructed with (for report echoes).
    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Integer in [lo, hi] inclusive.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return lo + next_u64() % (hi - lo + 1);
    }

    // Two independent standard normals (Box-Muller).
    std::pair<double, double> gauss_pair() {
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    double gauss() { return gauss_pair().first; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace ensvol
