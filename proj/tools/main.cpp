// dsmsolve: batch front end for the regularized solvers.
//
//   dsmsolve solve   --matrix A.mtx --rhs f.txt --method dsm --delta 1e-4
//                    --schedule default --out u.txt
//   dsmsolve bench   --gen hilbert:6 --deltas 1e-2,1e-4,1e-6 --methods
//                    dsm,tikhonov,oracle --seed 1 --csv sweep.csv
//   dsmsolve verify  --seed 1 --size-cap 12
//
// Exit codes: 0 success, 1 failed checks or failed sweep rows,
// 2 input/usage errors, 3 solver errors.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsm/linops.hpp"
#include "dsm/matrix_market.hpp"
#include "dsm/oracle.hpp"
#include "dsm/problems.hpp"
#include "dsm/solver.hpp"
#include "dsm/tikhonov.hpp"
#include "dsm/verify.hpp"

namespace {

using namespace dsm;

constexpr double kRowTolerance = 1e-7;  // integrator/solver slack in the row check

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse " + what + " value '" + s + "'");
    }
}

Schedule parse_schedule(const std::string& text) {
    if (text == "default") return Schedule::defaults();
    const std::string prefix = "custom:";
    if (text.rfind(prefix, 0) != 0)
        throw std::invalid_argument("schedule must be 'default' or 'custom:a=<value>,t=<value>'");
    std::optional<double> a, t;
    for (const auto& kv : split(text.substr(prefix.size()), ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad schedule component '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const double val = parse_double(kv.substr(eq + 1), "schedule " + key);
        if (key == "a")
            a = val;
        else if (key == "t")
            t = val;
        else
            throw std::invalid_argument("unknown schedule key '" + key + "'");
    }
    if (!a || !t) throw std::invalid_argument("custom schedule needs both a=<value> and t=<value>");
    if (*a <= 0.0 || *t <= 0.0) throw std::invalid_argument("custom schedule needs a > 0, t > 0");
    return Schedule::fixed(*a, *t);
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
    std::string matrix, rhs, method, schedule, out;
    double delta = 0.0;
    std::optional<double> a, t;
};

int cmd_solve(const SolveArgs& args) {
    const bool is_dsm = args.method == "dsm" || args.method == "dsm-v";
    const bool has_at = args.a.has_value() && args.t.has_value();
    if (is_dsm) {
        if (args.a.has_value() != args.t.has_value())
            throw std::invalid_argument("--a and --t must be given together");
        if (has_at == !args.schedule.empty())
            throw std::invalid_argument("give exactly one of (--a and --t) or --schedule");
    }
    if (args.method == "tikhonov" && !args.a && args.schedule.empty())
        throw std::invalid_argument("tikhonov needs --a or --schedule");
    if (args.delta < 0.0) throw std::invalid_argument("--delta must be >= 0");

    const SymmetricOperator A = read_matrix_market(args.matrix);
    const std::vector<double> f = read_vector(args.rhs);
    if (f.size() != A.n())
        throw std::invalid_argument("rhs length " + std::to_string(f.size()) +
                                    " does not match matrix size " + std::to_string(A.n()));

    std::vector<std::string> notes;
    notes.push_back("dsmsolve solve");
    notes.push_back("method: " + args.method);
    notes.push_back("matrix: " + args.matrix);
    notes.push_back("n: " + std::to_string(A.n()));
    notes.push_back("delta: " + format_double(args.delta));

    std::vector<double> estimate;
    if (is_dsm) {
        SolveReport rep;
        double a = 0.0, t = 0.0;
        if (has_at) {
            if (*args.a <= 0.0 || *args.t <= 0.0)
                throw std::invalid_argument("--a and --t must be positive");
            a = *args.a;
            t = *args.t;
        } else {
            const auto choice = parse_schedule(args.schedule).eval(args.delta);
            a = choice.a;
            t = choice.t;
        }
        rep = args.method == "dsm" ? solve(A, f, a, t, {}, args.delta)
                                   : solve_vform(A, f, a, t, {}, args.delta);
        notes.push_back("a: " + format_double(rep.a_used));
        notes.push_back("t: " + format_double(rep.t_used));
        notes.push_back("step: " + format_double(rep.step_used));
        notes.push_back("steps: " + std::to_string(rep.steps_taken));
        notes.push_back("noise_bound: " + format_double(rep.noise_bound));
        notes.push_back("imag_residue: " + format_double(rep.imag_residue));
        estimate = std::move(rep.estimate);
    } else if (args.method == "tikhonov") {
        const double a = args.a ? *args.a : parse_schedule(args.schedule).eval(args.delta).a;
        if (a <= 0.0) throw std::invalid_argument("--a must be positive");
        TikhonovReport rep = tikhonov_solve(A, f, a);
        if (!rep.converged) throw std::runtime_error("tikhonov: CG did not converge");
        notes.push_back("a: " + format_double(rep.a_used));
        notes.push_back("cg_iterations: " + std::to_string(rep.cg_iterations));
        notes.push_back("cg_residual: " + format_double(rep.cg_residual));
        estimate = std::move(rep.estimate);
    } else if (args.method == "oracle") {
        MinimalNormSolution sol = minimal_norm_solution(A, f);
        notes.push_back("rank: " + std::to_string(sol.rank));
        notes.push_back("range_residual: " + format_double(sol.range_residual));
        if (!sol.in_range(norm2(f)))
            notes.push_back("note: rhs has a null-space component; projected solution returned");
        estimate = std::move(sol.y);
    } else {
        throw std::invalid_argument("unknown method '" + args.method +
                                    "' (expected dsm, dsm-v, tikhonov, oracle)");
    }

    write_vector(estimate, args.out, notes);
    std::cout << "wrote " << args.out << " (method=" << args.method << ", n=" << A.n() << ")\n";
    return 0;
}

// ---------------------------------------------------------------- bench ----

struct BenchArgs {
    std::string gen, deltas, schedule = "default", methods = "dsm,tikhonov,oracle", csv;
    std::uint64_t seed = 1;
};

Problem make_problem(const std::string& gen, std::uint64_t seed) {
    const auto parts = split(gen, ':');
    if (parts.size() != 2)
        throw std::invalid_argument("generator must be hilbert:<n> or spectrum:<l1,l2,...>");
    if (parts[0] == "hilbert") {
        const long n = std::stol(parts[1]);
        if (n < 1) throw std::invalid_argument("hilbert size must be >= 1");
        return hilbert_problem(static_cast<std::size_t>(n), seed);
    }
    if (parts[0] == "spectrum") {
        std::vector<double> lam;
        for (const auto& tok : split(parts[1], ',')) lam.push_back(parse_double(tok, "eigenvalue"));
        return spectrum_problem(lam, seed);
    }
    throw std::invalid_argument("unknown generator '" + parts[0] + "'");
}

struct SweepRow {
    double delta = 0.0, a = 0.0, t = 0.0;
    std::string method;
    double error = 0.0, noise_bound = 0.0, spectral = 0.0, transient = 0.0, wall = 0.0;
    std::uint64_t steps_or_iters = 0;
    std::string status = "OK";
};

int cmd_bench(const BenchArgs& args) {
    if (args.csv.empty()) throw std::invalid_argument("--csv is required");
    std::vector<double> deltas;
    for (const auto& tok : split(args.deltas, ',')) deltas.push_back(parse_double(tok, "delta"));
    if (deltas.empty()) throw std::invalid_argument("--deltas must be a non-empty list");
    for (double d : deltas)
        if (d < 0.0) throw std::invalid_argument("deltas must be >= 0");
    const std::vector<std::string> methods = split(args.methods, ',');
    if (methods.empty()) throw std::invalid_argument("--methods must be a non-empty list");
    for (const auto& m : methods)
        if (m != "dsm" && m != "dsm-v" && m != "tikhonov" && m != "oracle")
            throw std::invalid_argument("unknown method '" + m + "'");
    const Schedule sched = parse_schedule(args.schedule);

    const Problem prob = make_problem(args.gen, args.seed);
    const EigenDecomposition eig = sym_eigen(prob.A);
    const double null_threshold = kDefaultNullTol * eig.max_abs_eigenvalue();
    double min_nonnull = eig.max_abs_eigenvalue();
    for (double lam : eig.eigenvalues)
        if (std::abs(lam) > null_threshold) min_nonnull = std::min(min_nonnull, std::abs(lam));

    auto err_vs_truth = [&](const std::vector<double>& est) {
        double s = 0.0;
        for (std::size_t i = 0; i < est.size(); ++i) {
            const double d = est[i] - prob.y_true[i];
            s += d * d;
        }
        return std::sqrt(s);
    };
    auto tik_bias = [&](double a) {
        double s = 0.0;
        for (std::size_t j = 0; j < eig.n; ++j) {
            const double yj = dot(eig.eigenvector(j), std::span<const double>(prob.y_true));
            const double lam = eig.eigenvalues[j];
            const double b = a / (lam * lam + a) * yj;
            s += b * b;
        }
        return std::sqrt(s);
    };

    std::vector<SweepRow> rows;
    bool any_failed = false;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        const NoisyRhs noisy = add_noise(prob.f, delta, args.seed * 1000003ULL + k);
        for (const auto& method : methods) {
            SweepRow row;
            row.delta = delta;
            row.method = method;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                if (method == "dsm" || method == "dsm-v") {
                    const auto choice = sched.eval(delta);
                    const SolveReport rep =
                        method == "dsm"
                            ? solve(prob.A, noisy.f_delta, choice.a, choice.t, {}, delta)
                            : solve_vform(prob.A, noisy.f_delta, choice.a, choice.t, {}, delta);
                    row.a = rep.a_used;
                    row.t = rep.t_used;
                    row.error = err_vs_truth(rep.estimate);
                    row.noise_bound = rep.noise_bound;
                    row.spectral = spectral_error(eig, prob.y_true, rep.a_used);
                    row.transient = std::exp(-rep.a_used * rep.t_used) *
                                    resolvent_norm(eig, prob.f, rep.a_used);
                    row.steps_or_iters = rep.steps_taken;
                } else if (method == "tikhonov") {
                    const double a = sched.eval(delta).a;
                    const TikhonovReport rep = tikhonov_solve(prob.A, noisy.f_delta, a);
                    if (!rep.converged) throw std::runtime_error("CG did not converge");
                    row.a = a;
                    row.error = err_vs_truth(rep.estimate);
                    // Worst-case noise gain of the filter lambda/(lambda^2 + a).
                    row.noise_bound = delta / (2.0 * std::sqrt(a));
                    row.spectral = tik_bias(a);
                    row.steps_or_iters = rep.cg_iterations;
                } else {  // oracle
                    const MinimalNormSolution sol = minimal_norm_solution(eig, noisy.f_delta);
                    row.error = err_vs_truth(sol.y);
                    row.noise_bound = delta / min_nonnull;
                    row.steps_or_iters = 0;
                }
                const bool ok =
                    row.error <= row.spectral + row.noise_bound + row.transient + kRowTolerance;
                row.status = ok ? "OK" : "FAIL";
            } catch (const std::exception& ex) {
                row.status = "FAILED";
                std::cerr << "row (delta=" << delta << ", method=" << method
                          << ") failed: " << ex.what() << "\n";
            }
            row.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (row.status != "OK") any_failed = true;
            rows.push_back(std::move(row));
        }
    }

    const std::filesystem::path csv_path(args.csv);
    const std::filesystem::path tmp_path(args.csv + ".tmp");
    {
        std::ofstream out(tmp_path);
        if (!out) throw io_error(tmp_path.string() + ": cannot open for writing");
        out << "delta,a,t,method,error_vs_ytrue,noise_bound,spectral_err,transient_bound,"
               "wall_time_s,steps_or_iters,status\n";
        char wall[32];
        for (const auto& r : rows) {
            std::snprintf(wall, sizeof wall, "%.6f", r.wall);
            out << format_double(r.delta) << ',' << format_double(r.a) << ','
                << format_double(r.t) << ',' << r.method << ',' << format_double(r.error) << ','
                << format_double(r.noise_bound) << ',' << format_double(r.spectral) << ','
                << format_double(r.transient) << ',' << wall << ',' << r.steps_or_iters << ','
                << r.status << '\n';
        }
        if (!out) throw io_error(tmp_path.string() + ": write failed");
    }
    std::filesystem::rename(tmp_path, csv_path);

    std::size_t ok_rows = 0;
    for (const auto& r : rows)
        if (r.status == "OK") ++ok_rows;
    std::cout << "wrote " << args.csv << ": " << ok_rows << "/" << rows.size() << " rows OK ("
              << prob.label << ", condition " << format_double(prob.condition) << ")\n";
    return any_failed ? 1 : 0;
}

// --------------------------------------------------------------- verify ----

int cmd_verify(std::uint64_t seed, long size_cap) {
    if (size_cap < 1 || size_cap > 64)
        throw std::invalid_argument("--size-cap must be in [1, 64]");
    const auto results = run_invariant_checks(seed, static_cast<std::size_t>(size_cap));
    std::size_t passed = 0;
    for (const auto& r : results) {
        std::printf("%-4s %-36s %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(), r.detail.c_str());
        if (r.passed) ++passed;
    }
    std::printf("%zu/%zu checks passed (seed=%llu, size cap=%ld)\n", passed, results.size(),
                static_cast<unsigned long long>(seed), size_cap);
    return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-free regularized solvers for ill-conditioned symmetric systems"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd_p = app.add_subcommand("solve", "solve one system from files");
    solve_cmd_p->add_option("--matrix", solve_args.matrix, "Matrix Market input")->required();
    solve_cmd_p->add_option("--rhs", solve_args.rhs, "right-hand side file")->required();
    solve_cmd_p->add_option("--method", solve_args.method, "dsm | dsm-v | tikhonov | oracle")
        ->required();
    solve_cmd_p->add_option("--delta", solve_args.delta, "declared noise level (default 0)");
    solve_cmd_p->add_option("--a", solve_args.a, "regularization shift");
    solve_cmd_p->add_option("--t", solve_args.t, "integration horizon");
    solve_cmd_p->add_option("--schedule", solve_args.schedule,
                            "default | custom:a=<value>,t=<value>");
    solve_cmd_p->add_option("--out", solve_args.out, "output vector file")->required();

    BenchArgs bench_args;
    auto* bench_cmd_p = app.add_subcommand("bench", "delta sweep comparing methods, CSV output");
    bench_cmd_p->add_option("--gen", bench_args.gen, "hilbert:<n> | spectrum:<l1,l2,...>")
        ->required();
    bench_cmd_p->add_option("--deltas", bench_args.deltas, "comma-separated noise levels")
        ->required();
    bench_cmd_p->add_option("--schedule", bench_args.schedule,
                            "default | custom:a=<value>,t=<value>");
    bench_cmd_p->add_option("--methods", bench_args.methods,
                            "comma-separated subset of dsm,dsm-v,tikhonov,oracle");
    bench_cmd_p->add_option("--seed", bench_args.seed, "generator / noise seed");
    bench_cmd_p->add_option("--csv", bench_args.csv, "output CSV path")->required();

    std::uint64_t verify_seed = 1;
    long size_cap = 12;
    auto* verify_cmd_p = app.add_subcommand("verify", "run the invariant suite");
    verify_cmd_p->add_option("--seed", verify_seed, "seed for all checks");
    verify_cmd_p->add_option("--size-cap", size_cap, "largest matrix size used (1..64)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (solve_cmd_p->parsed()) return cmd_solve(solve_args);
        if (bench_cmd_p->parsed()) return cmd_bench(bench_args);
        return cmd_verify(verify_seed, size_cap);
    } catch (const io_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "solver error: " << ex.what() << "\n";
        return 3;
    }
}
