#include "dsm/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace dsm {

Schedule::Choice Schedule::eval(double delta) const {
    if (delta < 0.0) throw std::invalid_argument("Schedule::eval: delta must be >= 0");

    Choice c;
    c.delta_effective = std::max(delta, kDeltaFloor);

    switch (a_rule) {
        case ARule::Power:
            c.a = std::max(a_scale * std::pow(c.delta_effective, a_exponent), kAFloor);
            break;
        case ARule::Fixed:
            c.a = a_scale;
            break;
    }
    switch (t_rule) {
        case TRule::LogOverA:
            c.t = t_scale * std::log(1.0 / c.delta_effective) / c.a;
            break;
        case TRule::Fixed:
            c.t = t_scale;
            break;
    }

    if (!(c.a > 0.0) || !std::isfinite(c.a))
        throw std::invalid_argument("Schedule::eval: schedule produced non-positive a");
    if (!(c.t > 0.0) || !std::isfinite(c.t))
        throw std::invalid_argument("Schedule::eval: schedule produced non-positive t");
    return c;
}

Schedule Schedule::fixed(double a, double t) {
    Schedule s;
    s.a_rule = ARule::Fixed;
    s.a_scale = a;
    s.t_rule = TRule::Fixed;
    s.t_scale = t;
    s.description = "fixed a, t";
    return s;
}

namespace {

constexpr double kStabilityLimit = 2.8;   // |h mu| cap for user-supplied steps
constexpr double kStabilitySafety = 2.5;  // derived steps stay inside this
constexpr std::size_t kPowerIters = 100;

// One RK4 stage: out = i(A + ia)x + g, with i(A+ia)x expanded as
//   re(out) = -(A x_im) - a x_re + g_re
//   im(out) =  (A x_re) - a x_im + g_im
void stage(const SymmetricOperator& A, double a, const double* xr, const double* xi,
           const double* gr, const double* gi, double* outr, double* outi, std::size_t n) {
    A.apply(xi, outr);
    A.apply(xr, outi);
    for (std::size_t k = 0; k < n; ++k) {
        outr[k] = -outr[k] - a * xr[k] + gr[k];
        outi[k] = outi[k] - a * xi[k] + gi[k];
    }
}

struct StepPlan {
    double h = 0.0;
    std::uint64_t full_steps = 0;
    double remainder = 0.0;
    std::uint64_t total_steps() const { return full_steps + (remainder > 0.0 ? 1 : 0); }
};

StepPlan plan_steps(const SymmetricOperator& A, double a, double T,
                    const IntegratorConfig& cfg) {
    if (!(a > 0.0)) throw std::invalid_argument("propagate: a must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("propagate: T must be > 0");
    if (cfg.max_steps < 1) throw std::invalid_argument("propagate: max_steps must be >= 1");
    if (!(cfg.max_step > 0.0)) throw std::invalid_argument("propagate: max_step must be > 0");

    const double rho = spectral_radius_estimate(A, kPowerIters);
    const double speed = std::sqrt(rho * rho + a * a);

    StepPlan plan;
    if (cfg.fixed_step) {
        const double h = *cfg.fixed_step;
        if (!(h > 0.0)) throw std::invalid_argument("propagate: fixed_step must be > 0");
        if (h * speed > kStabilityLimit)
            throw std::runtime_error("propagate: step violates the stability bound h*sqrt(rho^2+a^2) <= 2.8");
        plan.h = h;
    } else {
        plan.h = std::min(cfg.max_step, kStabilitySafety / speed);
    }

    const double approx = T / plan.h;
    if (approx > static_cast<double>(cfg.max_steps))
        throw std::runtime_error("propagate: horizon exceeds max_steps at the chosen step");

    plan.full_steps = static_cast<std::uint64_t>(approx);
    plan.remainder = T - static_cast<double>(plan.full_steps) * plan.h;
    if (plan.remainder <= plan.h * 1e-12) plan.remainder = 0.0;
    return plan;
}

// Core fixed-step RK4 loop for du/dt = i(A + ia)u + g with complex
// constant forcing g and initial state u0.
PropagationResult integrate(const SymmetricOperator& A, double a, double T,
                            const IntegratorConfig& cfg, ComplexVector u0,
                            const std::vector<double>& g_re, const std::vector<double>& g_im) {
    const std::size_t n = A.n();
    const StepPlan plan = plan_steps(A, a, T, cfg);

    PropagationResult out;
    out.step = plan.h;
    out.state = std::move(u0);

    std::vector<double> k1r(n), k1i(n), k2r(n), k2i(n), k3r(n), k3i(n), k4r(n), k4i(n);
    std::vector<double> xtr(n), xti(n);
    double* ur = out.state.re.data();
    double* ui = out.state.im.data();
    const double* gr = g_re.data();
    const double* gi = g_im.data();

    const std::uint64_t total = plan.total_steps();
    auto one_step = [&](double h) {
        const double h2 = 0.5 * h;
        stage(A, a, ur, ui, gr, gi, k1r.data(), k1i.data(), n);
        for (std::size_t k = 0; k < n; ++k) {
            xtr[k] = ur[k] + h2 * k1r[k];
            xti[k] = ui[k] + h2 * k1i[k];
        }
        stage(A, a, xtr.data(), xti.data(), gr, gi, k2r.data(), k2i.data(), n);
        for (std::size_t k = 0; k < n; ++k) {
            xtr[k] = ur[k] + h2 * k2r[k];
            xti[k] = ui[k] + h2 * k2i[k];
        }
        stage(A, a, xtr.data(), xti.data(), gr, gi, k3r.data(), k3i.data(), n);
        for (std::size_t k = 0; k < n; ++k) {
            xtr[k] = ur[k] + h * k3r[k];
            xti[k] = ui[k] + h * k3i[k];
        }
        stage(A, a, xtr.data(), xti.data(), gr, gi, k4r.data(), k4i.data(), n);
        const double w = h / 6.0;
        for (std::size_t k = 0; k < n; ++k) {
            ur[k] += w * (k1r[k] + 2.0 * (k2r[k] + k3r[k]) + k4r[k]);
            ui[k] += w * (k1i[k] + 2.0 * (k2i[k] + k3i[k]) + k4i[k]);
        }
    };

    for (std::uint64_t s = 1; s <= plan.full_steps; ++s) {
        one_step(plan.h);
        if (cfg.sample_stride > 0 &&
            (s % cfg.sample_stride == 0 || (s == total && plan.remainder == 0.0))) {
            out.samples.push_back({static_cast<double>(s) * plan.h, out.state});
        }
    }
    if (plan.remainder > 0.0) {
        one_step(plan.remainder);
        if (cfg.sample_stride > 0) out.samples.push_back({T, out.state});
    }
    out.steps = total;
    return out;
}

SolveReport extract_report(PropagationResult&& prop, bool vform, double a, double T,
                           double delta_declared) {
    SolveReport rep;
    rep.a_used = a;
    rep.t_used = T;
    rep.delta_declared = delta_declared;
    rep.steps_taken = prop.steps;
    rep.step_used = prop.step;
    rep.noise_bound = delta_declared / a;
    rep.samples.reserve(prop.samples.size());
    for (const auto& p : prop.samples) rep.samples.push_back({p.t, p.state.norm()});
    if (vform) {
        // v(T) already equals -i u(T); keep its real part.
        rep.imag_residue = prop.state.imag_norm();
        rep.estimate = std::move(prop.state.re);
    } else {
        // Re(-i u) = Im(u); the discarded imaginary part has norm ||Re(u)||.
        rep.imag_residue = prop.state.real_norm();
        rep.estimate = std::move(prop.state.im);
    }
    return rep;
}

void check_dim(const SymmetricOperator& A, std::span<const double> f, const char* who) {
    if (f.size() != A.n()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

PropagationResult rk4_propagate(const SymmetricOperator& A, std::span<const double> f, double a,
                                double T, const IntegratorConfig& cfg) {
    check_dim(A, f, "rk4_propagate");
    std::vector<double> g_re(f.begin(), f.end());
    std::vector<double> g_im(A.n(), 0.0);
    return integrate(A, a, T, cfg, ComplexVector(A.n()), g_re, g_im);
}

PropagationResult rk4_propagate_vform(const SymmetricOperator& A, std::span<const double> f,
                                      double a, double T, const IntegratorConfig& cfg) {
    check_dim(A, f, "rk4_propagate_vform");
    std::vector<double> g_re(A.n(), 0.0);
    std::vector<double> g_im(A.n());
    for (std::size_t k = 0; k < A.n(); ++k) g_im[k] = -f[k];  // forcing -i f
    return integrate(A, a, T, cfg, ComplexVector(A.n()), g_re, g_im);
}

PropagationResult rk4_propagate_homogeneous(const SymmetricOperator& A, const ComplexVector& u0,
                                            double a, double T, const IntegratorConfig& cfg) {
    if (u0.size() != A.n())
        throw std::invalid_argument("rk4_propagate_homogeneous: dimension mismatch");
    std::vector<double> zeros(A.n(), 0.0);
    return integrate(A, a, T, cfg, u0, zeros, zeros);
}

SolveReport solve(const SymmetricOperator& A, std::span<const double> f_delta, double a,
                  double T, const IntegratorConfig& cfg, double delta_declared) {
    return extract_report(rk4_propagate(A, f_delta, a, T, cfg), false, a, T, delta_declared);
}

SolveReport solve_vform(const SymmetricOperator& A, std::span<const double> f_delta, double a,
                        double T, const IntegratorConfig& cfg, double delta_declared) {
    return extract_report(rk4_propagate_vform(A, f_delta, a, T, cfg), true, a, T,
                          delta_declared);
}

SolveReport solve_auto(const SymmetricOperator& A, std::span<const double> f_delta, double delta,
                       const Schedule& schedule, const IntegratorConfig& cfg) {
    const Schedule::Choice c = schedule.eval(delta);
    SolveReport rep = solve(A, f_delta, c.a, c.t, cfg, delta);
    rep.noise_bound = delta / c.a;
    return rep;
}

double noise_propagation_bound(double delta, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("noise_propagation_bound: a must be > 0");
    if (delta < 0.0) throw std::invalid_argument("noise_propagation_bound: delta must be >= 0");
    return delta / a;
}

}  // namespace dsm
