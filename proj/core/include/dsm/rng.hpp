#pragma once

#include <cstdint>
#include <cmath>
#include <span>
#include <vector>

namespace dsm {

/// Deterministic 64-bit splittable generator (splitmix64).
///
/// The exact update is part of the library contract so that other
/// implementations can reproduce identical streams from the same seed:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// next_double() maps a draw to [0, 1) as (next() >> 11) * 2^-53.
/// Gaussian variates use Box-Muller on consecutive doubles u1, u2:
///   r = sqrt(-2 log(1 - u1)),  z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2).
struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr SplitMix64() = default;
    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent child generator seeded from this stream.
    SplitMix64 split() { return SplitMix64(next()); }

    /// One Box-Muller pair of standard normals.
    void next_gaussian_pair(double& z0, double& z1) {
        const double u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        z0 = r * std::cos(theta);
        z1 = r * std::sin(theta);
    }
};

/// Fills out with standard normals; an odd tail consumes a full pair
/// and discards the second half, keeping streams position-independent.
inline void fill_gaussian(SplitMix64& rng, std::span<double> out) {
    std::size_t i = 0;
    while (i + 1 < out.size()) {
        rng.next_gaussian_pair(out[i], out[i + 1]);
        i += 2;
    }
    if (i < out.size()) {
        double z0 = 0.0, z1 = 0.0;
        rng.next_gaussian_pair(z0, z1);
        out[i] = z0;
    }
}

inline std::vector<double> gaussian_vector(SplitMix64& rng, std::size_t n) {
    std::vector<double> v(n);
    fill_gaussian(rng, v);
    return v;
}

}  // namespace dsm
