#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace cggm {

// Reproducible random streams.
//
// Engine: std::mt19937_64 (its output sequence is pinned by the C++
// standard). Streams are derived from a user seed and a purpose tag so
// that independent parts of a generator (pattern, values, samples, ...)
// consume independent substreams:
//
//   state0 = splitmix64( fnv1a64(tag) ^ (seed * 0x9e3779b97f4a7c15) )
//
// All variate transforms below are implemented from raw engine output
// (no std::*_distribution), so a given (seed, tag) yields the same
// numbers on every standard library.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : eng_(state) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [lo, hi] by rejection (unbiased).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; the spare variate is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

inline RngStream make_stream(std::uint64_t seed, std::string_view tag) {
    const std::uint64_t mixed =
        detail::fnv1a64(tag) ^ (seed * 0x9e3779b97f4a7c15ull);
    return RngStream(detail::splitmix64(mixed));
}

}  // namespace cggm
