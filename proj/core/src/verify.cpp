#include "dsm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "dsm/linops.hpp"
#include "dsm/matrix_market.hpp"
#include "dsm/oracle.hpp"
#include "dsm/problems.hpp"
#include "dsm/rng.hpp"
#include "dsm/solver.hpp"
#include "dsm/tikhonov.hpp"

namespace dsm {

namespace {

// Calibrated once against the measured RK4-vs-closed-form constant and
// frozen at 10x the observed value; see tests for the calibration run.
constexpr double kOracleEquivC = 0.015;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

SymmetricOperator random_symmetric(SplitMix64& rng, std::size_t n) {
    std::vector<double> g = gaussian_vector(rng, n * n);
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            e[i * n + j] = 0.5 * (g[i * n + j] + g[j * n + i]);
    return SymmetricOperator(n, std::move(e));
}

std::vector<double> random_spectrum(SplitMix64& rng, std::size_t n, double lo, double hi,
                                    bool signed_values) {
    std::vector<double> lam(n);
    for (auto& v : lam) {
        const double mag = lo * std::pow(hi / lo, rng.next_double());
        v = (signed_values && rng.next_double() < 0.5) ? -mag : mag;
    }
    return lam;
}

struct Runner {
    std::vector<CheckResult> results;

    void run(const std::string& name, const std::function<std::string()>& body) {
        CheckResult r;
        r.name = name;
        try {
            r.detail = body();
            r.passed = true;
        } catch (const std::exception& ex) {
            r.passed = false;
            r.detail = ex.what();
        }
        results.push_back(std::move(r));
    }
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

}  // namespace

std::vector<CheckResult> run_invariant_checks(std::uint64_t seed, std::size_t size_cap) {
    if (size_cap < 1 || size_cap > 64)
        throw std::invalid_argument("run_invariant_checks: size_cap must be in [1, 64]");

    Runner runner;
    const std::size_t n12 = std::min<std::size_t>(size_cap, 12);
    const std::size_t n10 = std::min<std::size_t>(size_cap, 10);
    const std::size_t n8 = std::min<std::size_t>(size_cap, 8);

    runner.run("rng/golden-vectors", [&] {
        SplitMix64 g(0);
        require(g.next() == 0xE220A8397B1DCDAFULL, "splitmix64 reference vector mismatch");
        SplitMix64 a(seed), b(seed);
        for (int i = 0; i < 100; ++i) require(a.next() == b.next(), "stream not reproducible");
        return std::string("reference vector and reproducibility ok");
    });

    runner.run("linops/eigen-reconstruct", [&] {
        double worst = 0.0;
        for (int rep = 0; rep < 3; ++rep) {
            SplitMix64 rng(seed + 11 * rep);
            const auto A = random_symmetric(rng, n12);
            const auto eig = sym_eigen(A);
            for (std::size_t i = 0; i < A.n(); ++i)
                for (std::size_t j = 0; j < A.n(); ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < A.n(); ++k)
                        s += eig.eigenvalues[k] * eig.eigenvector(k)[i] * eig.eigenvector(k)[j];
                    worst = std::max(worst, std::abs(s - A(i, j)));
                }
        }
        require(worst <= 1e-9, "reconstruction error " + fmt(worst) + " > 1e-9");
        return "max entry error " + fmt(worst);
    });

    runner.run("linops/matvec-linearity", [&] {
        SplitMix64 rng(seed + 1);
        const auto A = random_symmetric(rng, n12);
        ComplexVector x(A.n()), y(A.n());
        fill_gaussian(rng, x.re);
        fill_gaussian(rng, x.im);
        fill_gaussian(rng, y.re);
        fill_gaussian(rng, y.im);
        const double alpha = 1.7, beta = -0.3;
        ComplexVector z(A.n());
        for (std::size_t i = 0; i < A.n(); ++i) {
            z.re[i] = alpha * x.re[i] + beta * y.re[i];
            z.im[i] = alpha * x.im[i] + beta * y.im[i];
        }
        const auto az = matvec(A, z);
        const auto ax = matvec(A, x);
        const auto ay = matvec(A, y);
        ComplexVector combo(A.n());
        for (std::size_t i = 0; i < A.n(); ++i) {
            combo.re[i] = alpha * ax.re[i] + beta * ay.re[i];
            combo.im[i] = alpha * ax.im[i] + beta * ay.im[i];
        }
        const double rel = distance(az, combo) / std::max(1e-300, az.norm());
        require(rel <= 1e-12, "linearity violation " + fmt(rel));
        return "relative deviation " + fmt(rel);
    });

    runner.run("linops/condition-scale-invariance", [&] {
        SplitMix64 rng(seed + 2);
        const auto A = random_symmetric(rng, n8);
        const double base = condition_number(A).value;
        for (double c : {2.0, -3.0, 1e-6}) {
            std::vector<double> e(A.entries().begin(), A.entries().end());
            for (double& v : e) v *= c;
            const double scaled = condition_number(SymmetricOperator(A.n(), std::move(e))).value;
            require(std::abs(scaled - base) <= 1e-12 * base,
                    "condition changed under scaling by " + fmt(c));
        }
        return "invariant under scaling, k(A) = " + fmt(base);
    });

    runner.run("oracle/spectral-error-identity", [&] {
        double worst = 0.0;
        for (int rep = 0; rep < 3; ++rep) {
            SplitMix64 rng(seed + 17 * rep + 3);
            auto lam = random_spectrum(rng, n10, 1e-3, 1.0, true);
            if (rep == 2 && n10 > 1) lam[0] = 0.0;  // include a singular case
            const auto prob = spectrum_problem(lam, seed + 31 * rep);
            const auto eig = sym_eigen(prob.A);
            for (double a : {1e-1, 1e-2, 1e-3}) {
                const double se = spectral_error(eig, prob.y_true, a);
                // Direct route: (A + ia)^{-1} A y - y assembled per component.
                double direct = 0.0;
                for (std::size_t j = 0; j < eig.n; ++j) {
                    const double yj = dot(eig.eigenvector(j), prob.y_true);
                    const std::complex<double> filt =
                        eig.eigenvalues[j] / std::complex<double>(eig.eigenvalues[j], a) - 1.0;
                    direct += std::norm(filt * yj);
                }
                direct = std::sqrt(direct);
                const double rel = std::abs(se - direct) / std::max(direct, 1e-300);
                worst = std::max(worst, rel);
            }
        }
        require(worst <= 1e-10, "identity deviation " + fmt(worst));
        return "max relative deviation " + fmt(worst);
    });

    runner.run("oracle/spectral-error-monotone", [&] {
        SplitMix64 rng(seed + 4);
        const auto prob = spectrum_problem(random_spectrum(rng, n10, 1e-3, 1.0, true), seed + 4);
        const auto eig = sym_eigen(prob.A);
        double prev = 0.0;
        for (int k = 0; k < 10; ++k) {
            const double a = 1e-4 * std::pow(10.0, k * 0.5);
            const double se = spectral_error(eig, prob.y_true, a);
            require(se + 1e-15 >= prev, "spectral error decreased in a");
            prev = se;
        }
        return "nondecreasing over 10-point a grid";
    });

    runner.run("oracle/spectral-error-limit", [&] {
        SplitMix64 rng(seed + 5);
        // The bias at shift a can reach (a / min|lambda|) * ||y||, so the
        // 1e-6 target at a = 1e-8 needs min|lambda| comfortably above 1e-2.
        const auto prob = spectrum_problem(random_spectrum(rng, n10, 2e-2, 1.0, false), seed + 5);
        const double se = spectral_error(prob.A, prob.y_true, 1e-8);
        require(se <= 1e-6 * norm2(prob.y_true), "limit violated: " + fmt(se));
        return "spectral error at a=1e-8 is " + fmt(se);
    });

    runner.run("oracle/closed-form-tail", [&] {
        SplitMix64 rng(seed + 6);
        const auto prob = spectrum_problem(random_spectrum(rng, n8, 1e-2, 1.0, true), seed + 6);
        const auto eig = sym_eigen(prob.A);
        for (double a : {0.5, 0.1}) {
            // Stationary value i (A + ia)^{-1} f per eigencomponent.
            ComplexVector stat(eig.n);
            for (std::size_t j = 0; j < eig.n; ++j) {
                const double fj = dot(eig.eigenvector(j), prob.f);
                const std::complex<double> uj =
                    std::complex<double>(0.0, 1.0) / std::complex<double>(eig.eigenvalues[j], a) *
                    fj;
                for (std::size_t i = 0; i < eig.n; ++i) {
                    stat.re[i] += uj.real() * eig.eigenvector(j)[i];
                    stat.im[i] += uj.imag() * eig.eigenvector(j)[i];
                }
            }
            const double resolvent = resolvent_norm(eig, prob.f, a);
            for (double t : {1.0, 5.0, 20.0}) {
                const auto u = closed_form_state(eig, prob.f, a, t);
                const double gap = distance(u, stat);
                require(gap <= std::exp(-a * t) * resolvent * (1.0 + 1e-12),
                        "tail bound violated at a=" + fmt(a) + " t=" + fmt(t));
            }
        }
        return "exp(-a t) tail bound holds";
    });

    runner.run("dsm/propagator-decay", [&] {
        for (int rep = 0; rep < 2; ++rep) {
            SplitMix64 rng(seed + 23 * rep + 7);
            const auto prob =
                spectrum_problem(random_spectrum(rng, n8, 1e-2, 1.0, true), seed + 7 + rep);
            ComplexVector u0(prob.A.n());
            fill_gaussian(rng, u0.re);
            fill_gaussian(rng, u0.im);
            const double u0n = u0.norm();
            for (double a : {0.1, 1.0}) {
                for (double t : {1.0, 5.0, 20.0}) {
                    const auto res = rk4_propagate_homogeneous(prob.A, u0, a, t);
                    const double h = res.step;
                    const double bound =
                        std::exp(-a * t) * u0n * (1.0 + 10.0 * h * h * h * h * t);
                    require(res.state.norm() <= bound, "decay bound violated at a=" + fmt(a) +
                                                           " t=" + fmt(t));
                }
            }
        }
        return "contraction bound holds for a in {0.1,1}, t <= 20";
    });

    runner.run("dsm/rk4-oracle-equivalence", [&] {
        SplitMix64 rng(seed + 8);
        const auto prob = spectrum_problem(random_spectrum(rng, n10, 1e-2, 1.0, true), seed + 8);
        const auto eig = sym_eigen(prob.A);
        IntegratorConfig cfg;
        cfg.fixed_step = 0.01;
        const double T = 20.0;
        double worst = 0.0;
        for (double a : {0.1, 0.02}) {
            const auto num = rk4_propagate(prob.A, prob.f, a, T, cfg);
            const auto exact = closed_form_state(eig, prob.f, a, T);
            worst = std::max(worst, distance(num.state, exact));
        }
        const double budget =
            kOracleEquivC * std::pow(0.01, 4) * T * norm2(prob.f);
        require(worst <= budget, "rk4 error " + fmt(worst) + " > budget " + fmt(budget));
        return "max error " + fmt(worst) + " within budget " + fmt(budget);
    });

    runner.run("dsm/rk4-order", [&] {
        SplitMix64 rng(seed + 9);
        const auto prob = spectrum_problem(random_spectrum(rng, n8, 1e-2, 1.0, true), seed + 9);
        const auto eig = sym_eigen(prob.A);
        const double a = 0.1, T = 20.0;
        IntegratorConfig cfg;
        cfg.fixed_step = 0.02;
        const auto coarse = rk4_propagate(prob.A, prob.f, a, T, cfg);
        cfg.fixed_step = 0.01;
        const auto fine = rk4_propagate(prob.A, prob.f, a, T, cfg);
        const auto exact = closed_form_state(eig, prob.f, a, T);
        const double e1 = distance(coarse.state, exact);
        const double e2 = distance(fine.state, exact);
        const double ratio = e1 / std::max(e2, 1e-300);
        require(ratio >= 12.0 && ratio <= 20.0, "halving ratio " + fmt(ratio) + " not in [12,20]");
        return "halving ratio " + fmt(ratio);
    });

    runner.run("dsm/noise-bound", [&] {
        SplitMix64 rng(seed + 10);
        const auto prob = spectrum_problem(random_spectrum(rng, n8, 1e-2, 1.0, true), seed + 10);
        const double a = 0.5, T = 10.0, delta = 0.05;
        const auto noisy = add_noise(prob.f, delta, seed + 10);
        const auto clean_run = rk4_propagate(prob.A, prob.f, a, T);
        const auto noisy_run = rk4_propagate(prob.A, noisy.f_delta, a, T);
        const double diff = distance(noisy_run.state, clean_run.state);
        const double bound = delta / a * (1.0 - std::exp(-a * T)) + 1e-10;
        require(diff <= bound, "noise propagation " + fmt(diff) + " > " + fmt(bound));
        return "trajectory difference " + fmt(diff) + " <= " + fmt(bound);
    });

    runner.run("dsm/triangle-decomposition", [&] {
        for (int rep = 0; rep < 2; ++rep) {
            SplitMix64 rng(seed + 29 * rep + 11);
            const auto prob =
                spectrum_problem(random_spectrum(rng, n8, 1e-3, 1.0, false), seed + 11 + rep);
            const auto eig = sym_eigen(prob.A);
            const double delta = 1e-3;
            const auto noisy = add_noise(prob.f, delta, seed + 12 + rep);
            const Schedule sched = Schedule::defaults();
            const auto rep_out = solve_auto(prob.A, noisy.f_delta, delta, sched);
            std::vector<double> err(prob.A.n());
            for (std::size_t i = 0; i < err.size(); ++i)
                err[i] = rep_out.estimate[i] - prob.y_true[i];
            const double bound = spectral_error(eig, prob.y_true, rep_out.a_used) +
                                 std::exp(-rep_out.a_used * rep_out.t_used) *
                                     resolvent_norm(eig, prob.f, rep_out.a_used) +
                                 rep_out.noise_bound + 1e-7;
            require(norm2(err) <= bound,
                    "decomposition bound violated: " + fmt(norm2(err)) + " > " + fmt(bound));
        }
        return "error within spectral + transient + delta/a budget";
    });

    runner.run("dsm/vform-identity", [&] {
        SplitMix64 rng(seed + 13);
        const auto prob = spectrum_problem(random_spectrum(rng, n8, 1e-2, 1.0, true), seed + 13);
        IntegratorConfig cfg;
        cfg.sample_stride = 200;
        const double a = 0.1, T = 15.0;
        const auto u_run = rk4_propagate(prob.A, prob.f, a, T, cfg);
        const auto v_run = rk4_propagate_vform(prob.A, prob.f, a, T, cfg);
        require(u_run.samples.size() == v_run.samples.size(), "sample streams differ");
        double worst = 0.0;
        for (std::size_t k = 0; k < u_run.samples.size(); ++k) {
            const auto& u = u_run.samples[k].state;
            const auto& v = v_run.samples[k].state;
            double s = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                // v + i u accumulated componentwise.
                const double dr = v.re[i] - u.im[i];
                const double di = v.im[i] + u.re[i];
                s += dr * dr + di * di;
            }
            worst = std::max(worst, std::sqrt(s) / std::max(u.norm(), 1e-300));
        }
        require(worst <= 1e-12, "v-form deviation " + fmt(worst));
        return "max relative deviation " + fmt(worst);
    });

    runner.run("dsm/schedule-surrogate", [&] {
        const Schedule sched = Schedule::defaults();
        for (int k = 1; k <= 12; ++k) {
            const double delta = std::pow(10.0, -k);
            const auto c = sched.eval(delta);
            require(c.a > 0.0 && c.t > 0.0, "non-positive schedule output");
            require(delta / c.a <= std::sqrt(delta) * (1.0 + 1e-12), "delta/a surrogate violated");
            require(c.a * c.t >= std::log(1.0 / delta) * (1.0 - 1e-12), "a*t surrogate violated");
        }
        return "all four surrogates hold for delta in 1e-1..1e-12";
    });

    runner.run("regbase/normal-residual", [&] {
        SplitMix64 rng(seed + 14);
        const auto prob = spectrum_problem(random_spectrum(rng, n10, 1e-2, 1.0, true), seed + 14);
        for (double a : {1e-1, 1e-2, 1e-3}) {
            const auto rep_out = tikhonov_solve(prob.A, prob.f, a);
            const double bnorm = norm2(matvec(prob.A, prob.f));
            require(rep_out.converged, "CG did not converge");
            require(rep_out.cg_residual <= 1e-12 * bnorm, "residual above tolerance");
        }
        return "CG residual within 1e-12 * ||A f||";
    });

    runner.run("regbase/optimality", [&] {
        SplitMix64 rng(seed + 15);
        const auto prob = spectrum_problem(random_spectrum(rng, n8, 1e-2, 1.0, true), seed + 15);
        const double a = 0.1;
        const auto rep_out = tikhonov_solve(prob.A, prob.f, a);
        auto functional = [&](const std::vector<double>& u) {
            const auto au = matvec(prob.A, u);
            double s = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double r = au[i] - prob.f[i];
                s += r * r + a * u[i] * u[i];
            }
            return s;
        };
        const double base = functional(rep_out.estimate);
        for (int k = 0; k < 20; ++k) {
            auto w = gaussian_vector(rng, prob.A.n());
            std::vector<double> pert = rep_out.estimate;
            for (std::size_t i = 0; i < pert.size(); ++i) pert[i] += 1e-3 * w[i];
            require(functional(pert) >= base - 1e-12 * std::max(1.0, base),
                    "perturbation decreased the functional");
        }
        return "20 perturbations confirm the minimizer";
    });

    runner.run("regbase/dsm-agreement", [&] {
        SplitMix64 rng(seed + 16);
        // Eigenvalues well above sqrt(a) keep both methods in the regime
        // where their filters differ by O(a); near lambda^2 ~ a the two
        // regularizations disagree transiently and the gap is not monotone.
        const auto prob = spectrum_problem(random_spectrum(rng, n8, 0.3, 1.0, false), seed + 16);
        double prev = -1.0;
        for (double a : {1e-1, 1e-2, 1e-3}) {
            const double T = std::log(1e8) / a;
            const auto d = solve(prob.A, prob.f, a, T);
            const auto t = tikhonov_solve(prob.A, prob.f, a);
            double s = 0.0;
            for (std::size_t i = 0; i < prob.A.n(); ++i) {
                const double diff = d.estimate[i] - t.estimate[i];
                s += diff * diff;
            }
            const double gap = std::sqrt(s);
            if (prev >= 0.0) require(gap <= 1.5 * prev, "difference did not shrink");
            prev = gap;
        }
        return "dsm and tikhonov estimates converge together as a -> 0";
    });

    runner.run("problems/construction-invariants", [&] {
        SplitMix64 rng(seed + 17);
        auto lam = random_spectrum(rng, n10, 1e-3, 1.0, true);
        if (n10 > 2) lam[1] = 0.0;
        const auto prob = spectrum_problem(lam, seed + 17);
        const auto f2 = matvec(prob.A, prob.y_true);
        double diff = 0.0;
        for (std::size_t i = 0; i < f2.size(); ++i)
            diff = std::max(diff, std::abs(f2[i] - prob.f[i]));
        require(diff <= 1e-12 * std::max(1.0, norm2(prob.f)), "f != A y_true");
        const auto eig = sym_eigen(prob.A);
        const double thr = kDefaultNullTol * eig.max_abs_eigenvalue();
        for (std::size_t j = 0; j < eig.n; ++j)
            if (std::abs(eig.eigenvalues[j]) <= thr)
                require(std::abs(dot(eig.eigenvector(j), prob.y_true)) <= 1e-10,
                        "y_true leaks into the null space");
        return "constructed problems satisfy their invariants";
    });

    runner.run("problems/spectrum-roundtrip", [&] {
        SplitMix64 rng(seed + 18);
        auto lam = random_spectrum(rng, n10, 1e-4, 1.0, true);
        const auto prob = spectrum_problem(lam, seed + 18);
        auto eigvals = sym_eigen(prob.A).eigenvalues;
        std::sort(lam.begin(), lam.end());
        double worst = 0.0;
        for (std::size_t j = 0; j < lam.size(); ++j)
            worst = std::max(worst, std::abs(lam[j] - eigvals[j]));
        require(worst <= 1e-9, "eigenvalue multiset deviates by " + fmt(worst));
        return "prescribed spectrum recovered to " + fmt(worst);
    });

    runner.run("problems/noise-norm", [&] {
        SplitMix64 rng(seed + 19);
        const auto f = gaussian_vector(rng, n12);
        for (double delta : {1e-1, 1e-3, 1e-6}) {
            const auto a = add_noise(f, delta, seed + 19);
            const auto b = add_noise(f, delta, seed + 19);
            require(a.f_delta == b.f_delta, "same seed produced different noise");
            require(std::abs(norm2(a.noise) - delta) <= 1e-14 * delta,
                    "noise norm deviates from delta");
        }
        return "noise is exact-norm and deterministic";
    });

    return runner.results;
}

}  // namespace dsm
