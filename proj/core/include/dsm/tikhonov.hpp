#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsm/linops.hpp"

namespace dsm {

struct TikhonovReport {
    std::vector<double> estimate;
    double a_used = 0.0;
    std::size_t cg_iterations = 0;
    double cg_residual = 0.0;  // true residual ||(A^2 + aI)u - A f||
    bool converged = false;
};

/// Minimizer of ||A u - f_delta||^2 + a ||u||^2, obtained by conjugate
/// gradients on (A^2 + aI)u = A f_delta using two matvec calls per CG
/// application; A^2 is never formed. cg_max = 0 means 10 * n. On
/// non-convergence the partial result is returned with converged = false.
TikhonovReport tikhonov_solve(const SymmetricOperator& A, std::span<const double> f_delta,
                              double a, double cg_tol = 1e-12, std::size_t cg_max = 0);

}  // namespace dsm
