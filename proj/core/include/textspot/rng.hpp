#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace textspot {

// Deterministic, platform-independent pseudo-random generator (splitmix64
// sequence). Every consumer that must reproduce bit-identical results across
// runs and implementations draws from this instead of <random>, whose
// distributions are implementation-defined.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; consumes two uniforms per draw.
    double next_normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Decorrelated child seed for sub-streams (per scene, per word, ...).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        DetRng r(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace textspot
