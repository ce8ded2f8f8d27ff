#include "dsm/tikhonov.hpp"

#include <cmath>
#include <stdexcept>

namespace dsm {

namespace {

// y = (A^2 + aI) x
void apply_normal(const SymmetricOperator& A, double a, const std::vector<double>& x,
                  std::vector<double>& scratch, std::vector<double>& y) {
    A.apply(x.data(), scratch.data());
    A.apply(scratch.data(), y.data());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

TikhonovReport tikhonov_solve(const SymmetricOperator& A, std::span<const double> f_delta,
                              double a, double cg_tol, std::size_t cg_max) {
    const std::size_t n = A.n();
    if (f_delta.size() != n) throw std::invalid_argument("tikhonov_solve: dimension mismatch");
    if (!(a > 0.0)) throw std::invalid_argument("tikhonov_solve: a must be > 0");
    if (cg_max == 0) cg_max = 10 * n;

    TikhonovReport rep;
    rep.a_used = a;
    rep.estimate.assign(n, 0.0);

    std::vector<double> b(n);
    A.apply(f_delta.data(), b.data());
    const double b_norm = norm2(b);
    const double target = cg_tol * b_norm;
    if (b_norm == 0.0) {
        rep.converged = true;
        return rep;
    }

    std::vector<double> r = b;  // r = b - M*0
    std::vector<double> p = r;
    std::vector<double> mp(n), scratch(n);
    double rs = dot(r, r);

    while (rep.cg_iterations < cg_max) {
        if (std::sqrt(rs) <= target) {
            // Recurrence says done; confirm with the true residual.
            apply_normal(A, a, rep.estimate, scratch, mp);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = b[i] - mp[i];
                s += r[i] * r[i];
            }
            rs = s;
            if (std::sqrt(rs) <= target) break;
            p = r;  // restart the search direction from the true residual
        }
        apply_normal(A, a, p, scratch, mp);
        const double pmp = dot(p, mp);
        if (pmp <= 0.0) break;  // cannot happen for a > 0 unless numerics died
        const double alpha = rs / pmp;
        for (std::size_t i = 0; i < n; ++i) {
            rep.estimate[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        const double rs_new = dot(r, r);
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rs_new / rs) * p[i];
        rs = rs_new;
        ++rep.cg_iterations;
    }

    apply_normal(A, a, rep.estimate, scratch, mp);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = b[i] - mp[i];
        s += ri * ri;
    }
    rep.cg_residual = std::sqrt(s);
    rep.converged = rep.cg_residual <= target;
    return rep;
}

}  // namespace dsm
