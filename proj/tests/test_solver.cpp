#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsm/linops.hpp"
#include "dsm/oracle.hpp"
#include "dsm/problems.hpp"
#include "dsm/solver.hpp"
#include "support.hpp"

using namespace dsm;
using dsmtest::err_vs;
using dsmtest::random_spectrum;

namespace {
// Frozen at 10x the constant observed when this check was first brought up;
// exceeding it means the integrator lost accuracy, not that the test is noisy.
constexpr double kOracleEquivC = 0.015;
}  // namespace

TEST_CASE("default schedule values") {
    const Schedule s = Schedule::defaults();

    const auto c1 = s.eval(1e-4);
    CHECK(c1.a == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(c1.t == doctest::Approx(921.0340371976183).epsilon(1e-12));

    const auto c2 = s.eval(1e-2);
    CHECK(c2.a == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(c2.t == doctest::Approx(46.051701859880914).epsilon(1e-12));

    // delta = 0 routes through the documented floors.
    const auto c0 = s.eval(0.0);
    CHECK(c0.a == doctest::Approx(1e-7).epsilon(1e-12));
    CHECK(c0.t == doctest::Approx(std::log(1e14) * 1e7).epsilon(1e-12));
    CHECK(c0.delta_effective == doctest::Approx(1e-14));

    CHECK_THROWS_AS(s.eval(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(s.eval(2.0), std::invalid_argument);  // log(1/2) < 0 makes t <= 0
}

TEST_CASE("default schedule satisfies the finite-sample surrogates") {
    const Schedule s = Schedule::defaults();
    for (int k = 1; k <= 12; ++k) {
        const double delta = std::pow(10.0, -k);
        const auto c = s.eval(delta);
        CHECK(c.a > 0.0);
        CHECK(c.t > 0.0);
        CHECK(delta / c.a <= std::sqrt(delta) * (1.0 + 1e-12));
        CHECK(c.a * c.t >= std::log(1.0 / delta) * (1.0 - 1e-12));
    }
}

TEST_CASE("fixed schedule") {
    const Schedule s = Schedule::fixed(0.05, 120.0);
    const auto c = s.eval(1e-3);
    CHECK(c.a == 0.05);
    CHECK(c.t == 120.0);
    CHECK_THROWS_AS(Schedule::fixed(-1.0, 5.0).eval(0.1), std::invalid_argument);
}

TEST_CASE("rk4 scalar null direction: du/dt = -u + 1") {
    const auto A0 = SymmetricOperator::diagonal({0.0});
    IntegratorConfig cfg;
    cfg.fixed_step = 1e-3;
    const auto res = rk4_propagate(A0, std::vector<double>{1.0}, 1.0, 1.0, cfg);
    CHECK(res.state.re[0] == doctest::Approx(0.63212055882855767).epsilon(1e-9));
    CHECK(std::abs(res.state.im[0]) <= 1e-13);
    CHECK(res.steps == 1000);
}

TEST_CASE("rk4 with zero forcing stays exactly zero") {
    const auto prob = spectrum_problem(random_spectrum(7, 5, 1e-2, 1.0, true), 7);
    const std::vector<double> zero(5, 0.0);
    const auto res = rk4_propagate(prob.A, zero, 0.3, 5.0);
    CHECK(res.state.norm() == 0.0);
}

TEST_CASE("rk4 scalar tracks the closed form through the transient") {
    const auto A1 = SymmetricOperator::diagonal({1.0});
    IntegratorConfig cfg;
    cfg.fixed_step = 0.01;
    const auto res = rk4_propagate(A1, std::vector<double>{1.0}, 0.1, 60.0, cfg);
    const auto exact = closed_form_state(A1, std::vector<double>{1.0}, 0.1, 60.0);
    CHECK(distance(res.state, exact) <= 1e-6);
    // Stationary value i/(1 + 0.1i) with the exp(-6) transient still present.
    CHECK(res.state.re[0] == doctest::Approx(0.0990099).epsilon(3e-2));
    CHECK(res.state.im[0] == doctest::Approx(0.9900990).epsilon(3e-3));
}

TEST_CASE("rk4 lands exactly on T with a shortened final step") {
    const auto A1 = SymmetricOperator::diagonal({0.5});
    IntegratorConfig cfg;
    cfg.fixed_step = 1e-3;
    const auto res = rk4_propagate(A1, std::vector<double>{1.0}, 0.2, 1.0005, cfg);
    CHECK(res.steps == 1001);
    const auto exact = closed_form_state(SymmetricOperator::diagonal({0.5}),
                                         std::vector<double>{1.0}, 0.2, 1.0005);
    CHECK(distance(res.state, exact) <= 1e-12);
}

TEST_CASE("step and cap violations are rejected") {
    const auto big = SymmetricOperator::diagonal({100.0});
    IntegratorConfig cfg;
    cfg.fixed_step = 0.05;  // h * sqrt(rho^2 + a^2) ~ 5.5 > 2.8
    CHECK_THROWS_AS(rk4_propagate(big, std::vector<double>{1.0}, 0.1, 1.0, cfg),
                    std::runtime_error);

    IntegratorConfig small_cap;
    small_cap.max_steps = 10;
    const auto A1 = SymmetricOperator::diagonal({1.0});
    CHECK_THROWS_AS(rk4_propagate(A1, std::vector<double>{1.0}, 0.1, 100.0, small_cap),
                    std::runtime_error);

    CHECK_THROWS_AS(rk4_propagate(A1, std::vector<double>{1.0}, -0.1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(rk4_propagate(A1, std::vector<double>{1.0, 2.0}, 0.1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("homogeneous runs contract like exp(-a t)") {
    for (std::uint64_t seed : {101ULL, 102ULL}) {
        const auto prob = spectrum_problem(random_spectrum(seed, 8, 1e-2, 1.0, true), seed);
        SplitMix64 rng(seed + 1);
        ComplexVector u0(8);
        fill_gaussian(rng, u0.re);
        fill_gaussian(rng, u0.im);
        const double u0n = u0.norm();
        for (double a : {0.1, 1.0}) {
            for (double t : {1.0, 5.0, 20.0}) {
                const auto res = rk4_propagate_homogeneous(prob.A, u0, a, t);
                const double h = res.step;
                CHECK(res.state.norm() <=
                      std::exp(-a * t) * u0n * (1.0 + 10.0 * h * h * h * h * t));
            }
        }
    }
}

TEST_CASE("rk4 agrees with the closed form within the frozen budget") {
    const auto prob = spectrum_problem(random_spectrum(110, 10, 1e-2, 1.0, true), 110);
    const auto eig = sym_eigen(prob.A);
    const double T = 20.0;
    IntegratorConfig cfg;
    cfg.fixed_step = 0.01;
    for (double a : {1.0, 0.1, 0.02}) {
        const auto res = rk4_propagate(prob.A, prob.f, a, T, cfg);
        const auto exact = closed_form_state(eig, prob.f, a, T);
        CHECK(distance(res.state, exact) <=
              kOracleEquivC * std::pow(*cfg.fixed_step, 4) * T * norm2(prob.f));
    }
}

TEST_CASE("halving the step cuts the error by about 16") {
    const auto prob = spectrum_problem(random_spectrum(111, 8, 1e-2, 1.0, true), 111);
    const auto eig = sym_eigen(prob.A);
    const double a = 0.1, T = 20.0;
    IntegratorConfig cfg;
    cfg.fixed_step = 0.01;
    const auto coarse = rk4_propagate(prob.A, prob.f, a, T, cfg);
    cfg.fixed_step = 0.005;
    const auto fine = rk4_propagate(prob.A, prob.f, a, T, cfg);
    const auto exact = closed_form_state(eig, prob.f, a, T);
    const double ratio = distance(coarse.state, exact) / distance(fine.state, exact);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("data noise propagates no worse than (delta/a)(1 - exp(-aT))") {
    const auto prob = spectrum_problem(random_spectrum(120, 7, 1e-2, 1.0, true), 120);
    const double a = 0.5, T = 10.0, delta = 0.02;
    const auto noisy = add_noise(prob.f, delta, 121);
    const auto clean = rk4_propagate(prob.A, prob.f, a, T);
    const auto perturbed = rk4_propagate(prob.A, noisy.f_delta, a, T);
    const double diff = distance(perturbed.state, clean.state);
    CHECK(diff <= delta / a * (1.0 - std::exp(-a * T)) + 1e-10);
    CHECK(diff <= noise_propagation_bound(delta, a) + 1e-10);
}

TEST_CASE("estimate error splits into spectral + transient + noise terms") {
    for (std::uint64_t seed : {130ULL, 131ULL, 132ULL}) {
        const auto prob = spectrum_problem(random_spectrum(seed, 8, 1e-3, 1.0, false), seed);
        const auto eig = sym_eigen(prob.A);
        const double delta = 1e-3;
        const auto noisy = add_noise(prob.f, delta, seed + 500);
        const auto rep = solve_auto(prob.A, noisy.f_delta, delta);
        const double bound = spectral_error(eig, prob.y_true, rep.a_used) +
                             std::exp(-rep.a_used * rep.t_used) *
                                 resolvent_norm(eig, prob.f, rep.a_used) +
                             rep.noise_bound + 1e-7;
        CHECK(err_vs(rep.estimate, prob.y_true) <= bound);
    }
}

TEST_CASE("v-form trajectory is -i times the u-form trajectory") {
    const auto prob = spectrum_problem(random_spectrum(140, 6, 1e-2, 1.0, true), 140);
    IntegratorConfig cfg;
    cfg.sample_stride = 100;
    const auto u_run = rk4_propagate(prob.A, prob.f, 0.1, 15.0, cfg);
    const auto v_run = rk4_propagate_vform(prob.A, prob.f, 0.1, 15.0, cfg);
    REQUIRE(u_run.samples.size() == v_run.samples.size());
    REQUIRE(u_run.samples.size() > 5);
    for (std::size_t k = 0; k < u_run.samples.size(); ++k) {
        const auto& u = u_run.samples[k].state;
        const auto& v = v_run.samples[k].state;
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double dr = v.re[i] - u.im[i];
            const double di = v.im[i] + u.re[i];
            s += dr * dr + di * di;
        }
        CHECK(std::sqrt(s) <= 1e-12 * u.norm());
    }
}

TEST_CASE("solve examples") {
    // Identity system: the estimate converges to f itself.
    const auto I2 = SymmetricOperator::identity(2);
    const auto rep = solve(I2, std::vector<double>{1.0, 0.0}, 1e-3, 2e4);
    CHECK(std::abs(rep.estimate[0] - 1.0) <= 1.1e-3);
    CHECK(std::abs(rep.estimate[1]) <= 1.1e-3);
    CHECK(rep.imag_residue >= 0.5e-3);
    CHECK(rep.imag_residue <= 1.5e-3);

    // Scalar: real part of -i u approaches lambda f / (lambda^2 + a^2).
    const auto A2 = SymmetricOperator::diagonal({2.0});
    const auto rep2 = solve(A2, std::vector<double>{2.0}, 0.1, 60.0);
    CHECK(std::abs(rep2.estimate[0] - 0.99750623441396513) <= 3e-3);

    // Zero data.
    const auto rep0 = solve(A2, std::vector<double>{0.0}, 0.1, 10.0);
    CHECK(rep0.estimate[0] == 0.0);
    CHECK(rep0.imag_residue == 0.0);
}

TEST_CASE("solve_vform matches solve") {
    const auto A1 = SymmetricOperator::diagonal({1.0});
    const auto u = solve(A1, std::vector<double>{1.0}, 0.1, 60.0);
    const auto v = solve_vform(A1, std::vector<double>{1.0}, 0.1, 60.0);
    CHECK(std::abs(u.estimate[0] - v.estimate[0]) <= 1e-12);
    // Stationary value 1/1.01 plus an exp(-6)-sized transient.
    CHECK(v.estimate[0] == doctest::Approx(0.99009900990099009).epsilon(3e-3));
    CHECK(std::abs(u.imag_residue - v.imag_residue) <= 1e-12);

    const auto v0 = solve_vform(A1, std::vector<double>{0.0}, 0.1, 5.0);
    CHECK(v0.estimate[0] == 0.0);
    CHECK(v0.imag_residue == 0.0);
}

TEST_CASE("solve_auto stamps schedule outputs and the noise bound") {
    const auto prob = spectrum_problem(random_spectrum(150, 4, 1e-1, 1.0, false), 150);
    const double delta = 1e-2;
    const auto noisy = add_noise(prob.f, delta, 151);
    const auto rep = solve_auto(prob.A, noisy.f_delta, delta);
    CHECK(rep.delta_declared == delta);
    CHECK(rep.a_used == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rep.t_used == doctest::Approx(46.051701859880914).epsilon(1e-12));
    CHECK(rep.noise_bound == delta / rep.a_used);

    // delta = 0 floors produce a horizon far beyond the default step cap.
    CHECK_THROWS_AS(solve_auto(prob.A, prob.f, 0.0), std::runtime_error);
}

TEST_CASE("noise_propagation_bound arithmetic") {
    CHECK(noise_propagation_bound(1e-3, 0.01) == doctest::Approx(0.1));
    CHECK(noise_propagation_bound(0.0, 0.25) == 0.0);
    CHECK(noise_propagation_bound(0.5, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(noise_propagation_bound(0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(noise_propagation_bound(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("sample stride records the trajectory ending at T") {
    const auto A1 = SymmetricOperator::diagonal({1.0});
    IntegratorConfig cfg;
    cfg.fixed_step = 0.01;
    cfg.sample_stride = 50;
    const auto rep = solve(A1, std::vector<double>{1.0}, 0.2, 10.0, cfg);
    REQUIRE(!rep.samples.empty());
    CHECK(rep.samples.back().t == doctest::Approx(10.0));
    for (std::size_t k = 1; k < rep.samples.size(); ++k)
        CHECK(rep.samples[k].t > rep.samples[k - 1].t);
}
