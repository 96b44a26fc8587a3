#pragma once

// Deterministic, splittable random streams.
//
// A stream is identified by (seed, label). The label is hashed into the
// generator state, so streams derived from the same seed but different
// labels are independent, and draw sequences depend on nothing but the
// (seed, label) pair. All draws are built from integer arithmetic plus
// libm, so a given platform reproduces sequences bit-for-bit.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "slrbench/common.hpp"

namespace slr {

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view text) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace detail

class Rng {
  public:
    Rng() : Rng(0, "") {}

    Rng(uint64_t seed, std::string_view stream) : seed_(seed) {
        state_ = seed ^ detail::fnv1a64(stream);
        // Decorrelate nearby (seed, label) pairs before the first draw.
        detail::splitmix64(state_);
        detail::splitmix64(state_);
    }

    uint64_t seed() const { return seed_; }

    // Child stream, independent of this stream's future draws.
    Rng child(std::string_view label) const {
        Rng r;
        r.seed_ = seed_;
        r.state_ = state_ ^ (detail::fnv1a64(label) | 1ull);
        detail::splitmix64(r.state_);
        detail::splitmix64(r.state_);
        return r;
    }

    uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform in [0,1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n).
    uint64_t below(uint64_t n) {
        if (n == 0) throw ParameterError("Rng::below: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Standard normal via Box-Muller. Two uniforms per draw, no cached
    // spare, so the draw count per call is fixed.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<uint64_t>(last - first);
        for (uint64_t i = n; i > 1; --i) {
            const uint64_t j = below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

  private:
    uint64_t seed_ = 0;
    uint64_t state_ = 0;
};

} // namespace slr
