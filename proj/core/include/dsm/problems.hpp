#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsm/linops.hpp"

namespace dsm {

/// Test problem with a known minimal-norm solution: f is constructed as
/// A * y_true (never solved for), and y_true is orthogonal to the null
/// space by construction.
struct Problem {
    SymmetricOperator A;
    std::vector<double> y_true;
    std::vector<double> f;
    std::string label;
    double condition = 0.0;  // +infinity when A is singular
};

/// Right-hand side with noise of exactly prescribed norm:
/// ||f_delta - f|| = delta (as constructed; the noise vector is kept so
/// paired clean/noisy runs can share the exact perturbation).
struct NoisyRhs {
    std::vector<double> f_delta;
    std::vector<double> noise;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

/// Hilbert matrix H[i][j] = 1/(i + j + 1), the canonical severely
/// ill-conditioned benchmark family. 1 <= n <= 512.
SymmetricOperator hilbert_matrix(std::size_t n);

/// A = Q diag(eigenvalues) Q^T with Q a seeded random orthogonal matrix
/// (QR of a seeded Gaussian). y_true is a seeded unit vector projected off
/// the null eigenspace; f = A y_true. Prescribing an exact zero eigenvalue
/// makes the problem singular (condition = infinity).
Problem spectrum_problem(const std::vector<double>& eigenvalues, std::uint64_t seed);

/// Hilbert system with a seeded random unit y_true and f = A y_true.
Problem hilbert_problem(std::size_t n, std::uint64_t seed);

/// f_delta = f + e where e is seeded Gaussian noise rescaled so that
/// ||e|| = delta exactly (zero vector when delta = 0). Saturating the
/// noise bound with equality makes delta/a sharp in tests.
NoisyRhs add_noise(std::span<const double> f, double delta, std::uint64_t seed);

}  // namespace dsm
