#include "dsm/linops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dsm/rng.hpp"

namespace dsm {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

SymmetricOperator::SymmetricOperator(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
    if (n_ == 0) throw std::invalid_argument("SymmetricOperator: n must be >= 1");
    if (entries_.size() != n_ * n_)
        throw std::invalid_argument("SymmetricOperator: entry count does not match n*n");

    double max_abs = 0.0;
    for (double v : entries_) max_abs = std::max(max_abs, std::abs(v));
    double max_asym = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            max_asym = std::max(max_asym, std::abs(entries_[i * n_ + j] - entries_[j * n_ + i]));

    if (max_asym > 1e-12 * max_abs)
        throw std::invalid_argument("SymmetricOperator: input is asymmetric beyond tolerance");

    // Symmetrize so entries[i][j] == entries[j][i] holds exactly.
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = 0.5 * (entries_[i * n_ + j] + entries_[j * n_ + i]);
            entries_[i * n_ + j] = v;
            entries_[j * n_ + i] = v;
        }
}

SymmetricOperator SymmetricOperator::diagonal(std::vector<double> diag) {
    const std::size_t n = diag.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
    return SymmetricOperator(n, std::move(e));
}

SymmetricOperator SymmetricOperator::identity(std::size_t n) {
    return diagonal(std::vector<double>(n, 1.0));
}

SymmetricOperator SymmetricOperator::zero(std::size_t n) {
    return diagonal(std::vector<double>(n, 0.0));
}

void SymmetricOperator::apply(const double* x, double* y) const {
    const double* row = entries_.data();
    for (std::size_t i = 0; i < n_; ++i, row += n_) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

double SymmetricOperator::max_abs_entry() const {
    double m = 0.0;
    for (double v : entries_) m = std::max(m, std::abs(v));
    return m;
}

double SymmetricOperator::frobenius_norm() const {
    double s = 0.0;
    for (double v : entries_) s += v * v;
    return std::sqrt(s);
}

double SymmetricOperator::infinity_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += std::abs(entries_[i * n_ + j]);
        m = std::max(m, s);
    }
    return m;
}

ComplexVector ComplexVector::from_real(std::span<const double> r) {
    ComplexVector v(r.size());
    std::copy(r.begin(), r.end(), v.re.begin());
    return v;
}

double ComplexVector::norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) s += re[i] * re[i] + im[i] * im[i];
    return std::sqrt(s);
}

double distance(const ComplexVector& x, const ComplexVector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dr = x.re[i] - y.re[i];
        const double di = x.im[i] - y.im[i];
        s += dr * dr + di * di;
    }
    return std::sqrt(s);
}

std::vector<double> matvec(const SymmetricOperator& A, std::span<const double> x) {
    if (x.size() != A.n()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(A.n());
    A.apply(x.data(), y.data());
    return y;
}

ComplexVector matvec(const SymmetricOperator& A, const ComplexVector& x) {
    if (x.size() != A.n()) throw std::invalid_argument("matvec: dimension mismatch");
    ComplexVector y(A.n());
    A.apply(x.re.data(), y.re.data());
    A.apply(x.im.data(), y.im.data());
    return y;
}

double EigenDecomposition::max_abs_eigenvalue() const {
    double m = 0.0;
    for (double v : eigenvalues) m = std::max(m, std::abs(v));
    return m;
}

namespace {

constexpr std::size_t kJacobiSweepCap = 100;

double offdiag_frobenius(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition sym_eigen(const SymmetricOperator& A) {
    const std::size_t n = A.n();
    std::vector<double> a(A.entries().begin(), A.entries().end());
    std::vector<double> v(n * n, 0.0);  // accumulated rotations, row-major
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const double stop = 1e-14 * A.frobenius_norm();

    std::size_t sweep = 0;
    while (offdiag_frobenius(a, n) > stop) {
        if (sweep++ >= kJacobiSweepCap)
            throw std::runtime_error("sym_eigen: Jacobi sweeps did not converge");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a[r * n + p];
                        const double arq = a[r * n + q];
                        a[r * n + p] = a[p * n + r] = arp - s * (arq + tau * arp);
                        a[r * n + q] = a[q * n + r] = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v[r * n + p];
                    const double vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    EigenDecomposition eig;
    eig.n = n;
    eig.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eig.eigenvalues[i] = a[i * n + i];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return eig.eigenvalues[i] < eig.eigenvalues[j];
    });

    std::vector<double> sorted_vals(n);
    eig.eigenvectors.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        sorted_vals[j] = eig.eigenvalues[src];
        // Fix the sign so the largest-magnitude component is positive.
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(v[i * n + src]) > std::abs(best)) best = v[i * n + src];
        const double sign = best < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) eig.eigenvectors[j * n + i] = sign * v[i * n + src];
    }
    eig.eigenvalues = std::move(sorted_vals);

    std::vector<double> av(n);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto vj = eig.eigenvector(j);
        A.apply(vj.data(), av.data());
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = av[i] - eig.eigenvalues[j] * vj[i];
            s += r * r;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    eig.residual_norm = worst;
    return eig;
}

bool ConditionNumber::finite() const { return std::isfinite(value); }

ConditionNumber condition_number(const EigenDecomposition& eig, double null_tol) {
    if (null_tol < 0.0) throw std::invalid_argument("condition_number: null_tol must be >= 0");
    const double max_abs = eig.max_abs_eigenvalue();
    ConditionNumber out;
    if (max_abs == 0.0) {
        out.value = std::numeric_limits<double>::infinity();
        out.zero_operator = true;
        return out;
    }
    const double threshold = null_tol * max_abs;
    double min_abs = std::numeric_limits<double>::infinity();
    bool singular = false;
    for (double lam : eig.eigenvalues) {
        const double m = std::abs(lam);
        if (m <= threshold)
            singular = true;
        else
            min_abs = std::min(min_abs, m);
    }
    out.value = singular ? std::numeric_limits<double>::infinity() : max_abs / min_abs;
    return out;
}

ConditionNumber condition_number(const SymmetricOperator& A, double null_tol) {
    return condition_number(sym_eigen(A), null_tol);
}

double spectral_radius_estimate(const SymmetricOperator& A, std::size_t iters) {
    if (iters < 1) throw std::invalid_argument("spectral_radius_estimate: iters must be >= 1");
    const std::size_t n = A.n();

    SplitMix64 rng(0x9E3779B97F4A7C15ULL);  // fixed start, identical on every call
    std::vector<double> x = gaussian_vector(rng, n);
    double xn = norm2(x);
    if (xn == 0.0) x.assign(n, 1.0), xn = std::sqrt(static_cast<double>(n));
    for (double& c : x) c /= xn;

    std::vector<double> y(n);
    double best = 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
        A.apply(x.data(), y.data());
        const double yn = norm2(y);
        best = std::max(best, yn);  // ||A x|| with ||x|| = 1
        if (yn == 0.0) break;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / yn;
    }
    return std::max(1.1 * best, A.infinity_norm() / static_cast<double>(n));
}

}  // namespace dsm
