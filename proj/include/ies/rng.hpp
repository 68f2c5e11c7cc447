#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ies {

/// Seeded random source with a fully specified draw sequence.
///
/// std::mt19937_64 output is pinned by the standard, but the distribution
/// adaptors are not, so uniform and gaussian draws are mapped here explicitly.
/// Scenarios and policies generated from the same seed therefore reproduce
/// bit-for-bit across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1): top 53 bits of one engine draw.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). uniform01() < 1, so the result stays below n.
    std::size_t uniform_below(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    }

    /// Standard normal via Box-Muller. Consumes two uniforms per pair,
    /// radius draw first; the second variate is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ies
