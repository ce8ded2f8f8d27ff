#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsm/linops.hpp"

namespace dsm {

/// Joint choice of shift a and horizon t as a function of the noise level.
/// The built-in default is a(delta) = sqrt(delta), t = log(1/delta)/a, so
/// delta/a = sqrt(delta) vanishes with the noise while a*t = log(1/delta)
/// grows, making the transient factor exp(-a t) = delta decay in lockstep.
///
/// delta = 0 ("numerically exact data") routes through floors
/// delta_floor = 1e-14 and a_floor = 1e-7 rather than attempting the
/// literal double limit.
struct Schedule {
    enum class ARule { Power, Fixed };
    enum class TRule { LogOverA, Fixed };

    ARule a_rule = ARule::Power;
    double a_scale = 1.0;     // Power: a = a_scale * delta^a_exponent; Fixed: a = a_scale
    double a_exponent = 0.5;
    TRule t_rule = TRule::LogOverA;
    double t_scale = 1.0;     // LogOverA: t = t_scale * log(1/delta)/a; Fixed: t = t_scale
    std::string description = "a = sqrt(delta), t = log(1/delta)/a";

    static constexpr double kDeltaFloor = 1e-14;
    static constexpr double kAFloor = 1e-7;

    struct Choice {
        double a = 0.0;
        double t = 0.0;
        double delta_effective = 0.0;
    };

    Choice eval(double delta) const;

    static Schedule defaults() { return Schedule{}; }
    static Schedule fixed(double a, double t);
};

/// Time-integration knobs. The step actually used is
///   h = fixed_step            when given (validated against stability), or
///   h = min(max_step, 2.5 / sqrt(rho^2 + a^2))   otherwise,
/// where rho is the spectral radius estimate. The shifted generator
/// i(A + ia) has eigenvalues -a + i lambda, so the classical fourth-order
/// stability region on the imaginary axis (|h mu| up to 2.8) is binding;
/// 2.5 leaves headroom. max_step defaults to 5e-3 for accuracy well below
/// the stability limit.
struct IntegratorConfig {
    std::optional<double> fixed_step{};
    double max_step = 5e-3;
    std::size_t sample_stride = 0;   // record trajectory every k steps; 0 = none
    std::uint64_t max_steps = 400000000;
};

struct TrajectoryPoint {
    double t = 0.0;
    ComplexVector state;
};

struct PropagationResult {
    ComplexVector state;
    std::vector<TrajectoryPoint> samples;
    std::uint64_t steps = 0;
    double step = 0.0;  // h used for full steps
};

/// Classical fixed-step RK4 on  du/dt = i(A + ia)u + f,  u(0) = 0, up to
/// t = T (final partial step shortened to land exactly on T). Only
/// matrix-vector products with A are used; no matrix is formed, multiplied,
/// or inverted anywhere on this path.
PropagationResult rk4_propagate(const SymmetricOperator& A, std::span<const double> f,
                                double a, double T, const IntegratorConfig& cfg = {});

/// Same integrator on  dv/dt = i(A + ia)v - i f,  v(0) = 0. By linearity
/// v(t) = -i u(t) identically, so this must track rk4_propagate step for
/// step; it exists as an independently integrated cross-check.
PropagationResult rk4_propagate_vform(const SymmetricOperator& A, std::span<const double> f,
                                      double a, double T, const IntegratorConfig& cfg = {});

/// Homogeneous run (f = 0) from a given initial state; the exact flow
/// contracts as exp(-a t) because ||exp(iAt)|| = 1.
PropagationResult rk4_propagate_homogeneous(const SymmetricOperator& A, const ComplexVector& u0,
                                            double a, double T,
                                            const IntegratorConfig& cfg = {});

struct SolveSample {
    double t = 0.0;
    double state_norm = 0.0;
};

/// Outcome of a solve: the returned estimate is the real part of -i u(T);
/// the norm of the discarded imaginary part is reported, never silently
/// dropped (it shrinks with a and is itself a convergence indicator).
struct SolveReport {
    std::vector<double> estimate;
    double imag_residue = 0.0;
    double a_used = 0.0;
    double t_used = 0.0;
    double delta_declared = 0.0;
    std::uint64_t steps_taken = 0;
    double noise_bound = 0.0;  // delta_declared / a_used
    double step_used = 0.0;
    std::vector<SolveSample> samples;
};

/// Integrates the shifted Cauchy problem with data f_delta and extracts
/// the estimate -i u(T) (real part, with the imaginary residue reported).
SolveReport solve(const SymmetricOperator& A, std::span<const double> f_delta, double a,
                  double T, const IntegratorConfig& cfg = {}, double delta_declared = 0.0);

/// Computes (a, t) from the schedule for the declared noise level, then
/// delegates to solve(). The report carries noise_bound = delta/a.
SolveReport solve_auto(const SymmetricOperator& A, std::span<const double> f_delta,
                       double delta, const Schedule& schedule = Schedule::defaults(),
                       const IntegratorConfig& cfg = {});

/// v-form twin of solve(): integrates dv/dt = i(A+ia)v - i f_delta and
/// returns the real part of v(T) directly.
SolveReport solve_vform(const SymmetricOperator& A, std::span<const double> f_delta, double a,
                        double T, const IntegratorConfig& cfg = {}, double delta_declared = 0.0);

/// Worst-case propagation of a data error of norm delta through the
/// trajectory: delta / a.
double noise_propagation_bound(double delta, double a);

}  // namespace dsm
