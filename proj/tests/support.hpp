#pragma once

// Shared helpers for the test binaries.

#include <cmath>
#include <cstdint>
#include <vector>

#include "dsm/linops.hpp"
#include "dsm/rng.hpp"

namespace dsmtest {

inline dsm::SymmetricOperator random_symmetric(std::uint64_t seed, std::size_t n) {
    dsm::SplitMix64 rng(seed);
    std::vector<double> g = dsm::gaussian_vector(rng, n * n);
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] = 0.5 * (g[i * n + j] + g[j * n + i]);
    return dsm::SymmetricOperator(n, std::move(e));
}

/// Log-uniform magnitudes in [lo, hi], optionally with random signs.
inline std::vector<double> random_spectrum(std::uint64_t seed, std::size_t n, double lo,
                                           double hi, bool signed_values) {
    dsm::SplitMix64 rng(seed);
    std::vector<double> lam(n);
    for (auto& v : lam) {
        const double mag = lo * std::pow(hi / lo, rng.next_double());
        v = (signed_values && rng.next_double() < 0.5) ? -mag : mag;
    }
    return lam;
}

inline double err_vs(const std::vector<double>& est, const std::vector<double>& truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double d = est[i] - truth[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline std::vector<double> unit_gaussian(std::uint64_t seed, std::size_t n) {
    dsm::SplitMix64 rng(seed);
    auto v = dsm::gaussian_vector(rng, n);
    const double vn = dsm::norm2(v);
    for (auto& x : v) x /= vn;
    return v;
}

}  // namespace dsmtest
