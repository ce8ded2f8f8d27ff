#include "dsm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace dsm {

bool MinimalNormSolution::in_range(double f_norm) const {
    return range_residual <= 1e-8 * std::max(1.0, f_norm);
}

MinimalNormSolution minimal_norm_solution(const EigenDecomposition& eig,
                                          std::span<const double> f, double null_tol) {
    const std::size_t n = eig.n;
    if (f.size() != n) throw std::invalid_argument("minimal_norm_solution: dimension mismatch");
    const double threshold = null_tol * eig.max_abs_eigenvalue();

    MinimalNormSolution out;
    out.y.assign(n, 0.0);
    double null_mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto vj = eig.eigenvector(j);
        const double fj = dot(vj, f);
        if (std::abs(eig.eigenvalues[j]) > threshold) {
            const double c = fj / eig.eigenvalues[j];
            for (std::size_t i = 0; i < n; ++i) out.y[i] += c * vj[i];
            ++out.rank;
        } else {
            null_mass += fj * fj;
        }
    }
    out.range_residual = std::sqrt(null_mass);
    return out;
}

MinimalNormSolution minimal_norm_solution(const SymmetricOperator& A,
                                          std::span<const double> f, double null_tol) {
    return minimal_norm_solution(sym_eigen(A), f, null_tol);
}

ComplexVector closed_form_state(const EigenDecomposition& eig, std::span<const double> f,
                                double a, double t) {
    const std::size_t n = eig.n;
    if (f.size() != n) throw std::invalid_argument("closed_form_state: dimension mismatch");
    if (a <= 0.0) throw std::invalid_argument("closed_form_state: a must be > 0");
    if (t < 0.0) throw std::invalid_argument("closed_form_state: t must be >= 0");

    const std::complex<double> I(0.0, 1.0);
    ComplexVector u(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto vj = eig.eigenvector(j);
        const double lam = eig.eigenvalues[j];
        const double fj = dot(vj, f);
        // exp((i lam - a) t) stays bounded because a > 0.
        const std::complex<double> decay = std::exp(std::complex<double>(-a * t, lam * t));
        const std::complex<double> uj = I / std::complex<double>(lam, a) * (1.0 - decay) * fj;
        for (std::size_t i = 0; i < n; ++i) {
            u.re[i] += uj.real() * vj[i];
            u.im[i] += uj.imag() * vj[i];
        }
    }
    return u;
}

ComplexVector closed_form_state(const SymmetricOperator& A, std::span<const double> f,
                                double a, double t) {
    return closed_form_state(sym_eigen(A), f, a, t);
}

double spectral_error(const EigenDecomposition& eig, std::span<const double> y, double a) {
    const std::size_t n = eig.n;
    if (y.size() != n) throw std::invalid_argument("spectral_error: dimension mismatch");
    if (a <= 0.0) throw std::invalid_argument("spectral_error: a must be > 0");

    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lam = eig.eigenvalues[j];
        const double yj = dot(eig.eigenvector(j), y);
        s += (a * a) / (a * a + lam * lam) * yj * yj;
    }
    return std::sqrt(s);
}

double spectral_error(const SymmetricOperator& A, std::span<const double> y, double a) {
    return spectral_error(sym_eigen(A), y, a);
}

double resolvent_norm(const EigenDecomposition& eig, std::span<const double> f, double a) {
    const std::size_t n = eig.n;
    if (f.size() != n) throw std::invalid_argument("resolvent_norm: dimension mismatch");
    if (a <= 0.0) throw std::invalid_argument("resolvent_norm: a must be > 0");

    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lam = eig.eigenvalues[j];
        const double fj = dot(eig.eigenvector(j), f);
        s += fj * fj / (lam * lam + a * a);
    }
    return std::sqrt(s);
}

}  // namespace dsm
