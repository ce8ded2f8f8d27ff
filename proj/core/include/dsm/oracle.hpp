#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsm/linops.hpp"

namespace dsm {

/// Minimal-norm solution of A y = f, built in the eigenbasis: components on
/// eigenvalues below the null threshold are dropped, so y is orthogonal to
/// the null space by construction. range_residual is the norm of the part
/// of f living in the dropped eigenspace; a value above
/// 1e-8 * max(1, ||f||) means f is not (numerically) in the range of A,
/// and the caller decides whether to proceed with the projection or abort.
struct MinimalNormSolution {
    std::vector<double> y;
    double range_residual = 0.0;
    std::size_t rank = 0;

    bool in_range(double f_norm) const;
};

MinimalNormSolution minimal_norm_solution(const EigenDecomposition& eig,
                                          std::span<const double> f,
                                          double null_tol = kDefaultNullTol);
MinimalNormSolution minimal_norm_solution(const SymmetricOperator& A,
                                          std::span<const double> f,
                                          double null_tol = kDefaultNullTol);

/// Closed-form trajectory of  du/dt = i(A + ia)u + f,  u(0) = 0,
/// assembled per eigencomponent as
///   u_j = i/(lambda_j + ia) * (1 - exp((i lambda_j - a) t)) * <v_j, f>.
/// This is the exact value the time integrator approximates; it is used by
/// tests and the verification mode, never by the matrix-free solve path.
ComplexVector closed_form_state(const EigenDecomposition& eig, std::span<const double> f,
                                double a, double t);
ComplexVector closed_form_state(const SymmetricOperator& A, std::span<const double> f,
                                double a, double t);

/// Regularization bias at shift a:
///   sqrt( sum_j a^2/(a^2 + lambda_j^2) * <v_j, y>^2 )
/// which equals ||(A + ia)^{-1} A y - y||. Nondecreasing in a, and -> 0 as
/// a -> 0 whenever y is orthogonal to the null space.
double spectral_error(const EigenDecomposition& eig, std::span<const double> y, double a);
double spectral_error(const SymmetricOperator& A, std::span<const double> y, double a);

/// ||(A + ia)^{-1} f|| evaluated in the eigenbasis; the transient of the
/// trajectory decays as exp(-a t) times this value.
double resolvent_norm(const EigenDecomposition& eig, std::span<const double> f, double a);

}  // namespace dsm
