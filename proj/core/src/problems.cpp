#include "dsm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsm/rng.hpp"

namespace dsm {

SymmetricOperator hilbert_matrix(std::size_t n) {
    if (n < 1 || n > 512) throw std::invalid_argument("hilbert_matrix: n out of range [1, 512]");
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            e[i * n + j] = 1.0 / static_cast<double>(i + j + 1);
    return SymmetricOperator(n, std::move(e));
}

namespace {

// Columns of a random orthogonal matrix: modified Gram-Schmidt with one
// re-orthogonalization pass over seeded Gaussian columns, diagonal of R
// kept positive so the result is deterministic up to roundoff.
std::vector<std::vector<double>> random_orthogonal(std::size_t n, SplitMix64& rng) {
    std::vector<std::vector<double>> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = gaussian_vector(rng, n);

    std::vector<std::vector<double>> q(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v = g[j];
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                const double c = dot(q[i], v);
                for (std::size_t k = 0; k < n; ++k) v[k] -= c * q[i][k];
            }
        const double vn = norm2(v);
        if (vn < 1e-12) throw std::runtime_error("random_orthogonal: degenerate draw");
        // v = (I - QQ^T) g_j, so <v, g_j> = ||v||^2 and the implicit R
        // diagonal is already positive.
        for (double& x : v) x /= vn;
        q[j] = std::move(v);
    }
    return q;
}

}  // namespace

Problem spectrum_problem(const std::vector<double>& eigenvalues, std::uint64_t seed) {
    const std::size_t n = eigenvalues.size();
    if (n == 0) throw std::invalid_argument("spectrum_problem: eigenvalue list is empty");

    SplitMix64 rng(seed);
    const auto q = random_orthogonal(n, rng);

    // A = sum_k lambda_k q_k q_k^T, filled symmetrically so equality of
    // mirrored entries is exact.
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += eigenvalues[k] * q[k][i] * q[k][j];
            entries[i * n + j] = s;
            entries[j * n + i] = s;
        }
    SymmetricOperator A(n, std::move(entries));

    std::vector<double> y = gaussian_vector(rng, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eigenvalues[k] != 0.0) continue;
        const double c = dot(q[k], y);
        for (std::size_t i = 0; i < n; ++i) y[i] -= c * q[k][i];
    }
    const double yn = norm2(y);
    if (yn < 1e-8)
        throw std::runtime_error("spectrum_problem: projection annihilated y_true (degenerate)");
    for (double& x : y) x /= yn;

    std::vector<double> f = matvec(A, y);
    Problem p{std::move(A), std::move(y), std::move(f), "", 0.0};

    double max_abs = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    bool singular = false;
    std::string lams;
    for (double lam : eigenvalues) {
        max_abs = std::max(max_abs, std::abs(lam));
        if (lam == 0.0)
            singular = true;
        else
            min_abs = std::min(min_abs, std::abs(lam));
        if (!lams.empty()) lams += ",";
        lams += std::to_string(lam);
    }
    p.condition = (singular || max_abs == 0.0) ? std::numeric_limits<double>::infinity()
                                               : max_abs / min_abs;
    p.label = "spectrum(" + lams + ") seed=" + std::to_string(seed);
    return p;
}

Problem hilbert_problem(std::size_t n, std::uint64_t seed) {
    SymmetricOperator A = hilbert_matrix(n);
    SplitMix64 rng(seed);
    std::vector<double> y = gaussian_vector(rng, n);
    const double yn = norm2(y);
    for (double& x : y) x /= yn;

    std::vector<double> f = matvec(A, y);
    Problem p{A, std::move(y), std::move(f), "hilbert(" + std::to_string(n) + ")", 0.0};
    p.condition = condition_number(A).value;
    return p;
}

NoisyRhs add_noise(std::span<const double> f, double delta, std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("add_noise: delta must be >= 0");
    const std::size_t n = f.size();

    NoisyRhs out;
    out.delta = delta;
    out.seed = seed;
    out.f_delta.assign(f.begin(), f.end());
    out.noise.assign(n, 0.0);
    if (delta == 0.0 || n == 0) return out;

    SplitMix64 rng(seed);
    out.noise = gaussian_vector(rng, n);
    // Two scaling passes pin ||noise|| to delta within a couple of ulps.
    for (int pass = 0; pass < 2; ++pass) {
        const double s = delta / norm2(out.noise);
        for (double& x : out.noise) x *= s;
    }
    for (std::size_t i = 0; i < n; ++i) out.f_delta[i] = f[i] + out.noise[i];
    return out;
}

}  // namespace dsm
