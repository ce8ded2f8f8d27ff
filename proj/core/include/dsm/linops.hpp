#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dsm {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Dense real symmetric n x n operator. Immutable after construction and
/// safe to share across threads.
///
/// The constructor accepts a full row-major entry list. Inputs whose
/// asymmetry is at most 1e-12 * max|entry| are symmetrized as (M + M^T)/2;
/// anything worse is rejected, since that indicates a genuinely
/// non-symmetric matrix rather than file roundoff.
class SymmetricOperator {
public:
    SymmetricOperator(std::size_t n, std::vector<double> entries);

    static SymmetricOperator diagonal(std::vector<double> diag);
    static SymmetricOperator identity(std::size_t n);
    static SymmetricOperator zero(std::size_t n);

    std::size_t n() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> entries() const { return entries_; }

    /// y = A x over raw arrays of length n(); x and y must not alias.
    void apply(const double* x, double* y) const;

    double max_abs_entry() const;
    double frobenius_norm() const;
    /// Largest absolute row sum (the infinity norm).
    double infinity_norm() const;

private:
    std::size_t n_;
    std::vector<double> entries_;  // row-major, exactly symmetric
};

/// Complex n-vector stored as separate real and imaginary parts.
struct ComplexVector {
    std::vector<double> re;
    std::vector<double> im;

    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : re(n, 0.0), im(n, 0.0) {}

    static ComplexVector from_real(std::span<const double> r);

    std::size_t size() const { return re.size(); }
    double norm() const;
    double real_norm() const { return norm2(re); }
    double imag_norm() const { return norm2(im); }
};

/// l2 norm of the difference x - y.
double distance(const ComplexVector& x, const ComplexVector& y);

std::vector<double> matvec(const SymmetricOperator& A, std::span<const double> x);

/// Applies A to real and imaginary parts independently.
ComplexVector matvec(const SymmetricOperator& A, const ComplexVector& x);

/// Full eigendecomposition A = V diag(lambda) V^T.
/// eigenvalues are sorted ascending; eigenvector j is stored contiguously
/// (column-major) and paired with eigenvalues[j]. residual_norm is
/// max_j ||A v_j - lambda_j v_j||.
struct EigenDecomposition {
    std::size_t n = 0;
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;  // column-major, n x n
    double residual_norm = 0.0;

    std::span<const double> eigenvector(std::size_t j) const {
        return std::span<const double>(eigenvectors).subspan(j * n, n);
    }
    double max_abs_eigenvalue() const;
};

/// Cyclic Jacobi rotations; converges when the off-diagonal Frobenius mass
/// drops below 1e-14 * ||A||_F. Throws after 100 sweeps without
/// convergence, which signals pathological input. Adequate for dense
/// matrices up to a few hundred rows.
EigenDecomposition sym_eigen(const SymmetricOperator& A);

inline constexpr double kDefaultNullTol = 1e-12;

/// Condition number max|lambda| / min|lambda| over eigenvalues with
/// |lambda| > null_tol * max|lambda|. value is +infinity when the
/// operator has a (numerically) nontrivial null space.
struct ConditionNumber {
    double value = 0.0;
    bool zero_operator = false;

    bool finite() const;
};

ConditionNumber condition_number(const EigenDecomposition& eig, double null_tol = kDefaultNullTol);
ConditionNumber condition_number(const SymmetricOperator& A, double null_tol = kDefaultNullTol);

/// Upper estimate of the spectral radius: power iteration from a fixed
/// deterministic start vector, times a 1.1 safety factor, floored by
/// ||A||_inf / n. Used to derive stable integrator steps.
double spectral_radius_estimate(const SymmetricOperator& A, std::size_t iters);

}  // namespace dsm
