// rankone: rank-1 maxvol cross approximation, bounds, oracles and experiments.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rankone/bounds.hpp"
#include "rankone/config.hpp"
#include "rankone/experiment.hpp"
#include "rankone/matrix_io.hpp"
#include "rankone/maxvol.hpp"
#include "rankone/oracle.hpp"
#include "rankone/selftest.hpp"

namespace {

using namespace rankone;

constexpr int kExitOk     = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo     = 2;

// ---------------------------------------------------------------------------
// approx

struct ApproxArgs {
    std::string matrix;
    Index       start_col = 0;
    std::string variant   = "converge";
    int         k         = 4;
    bool        trace     = false;
};

template <typename T>
std::string format_value(const T& x)
{
    if constexpr (is_complex_v<T>)
        return fmt::format("{:.17g}{:+.17g}i", x.real(), x.imag());
    else
        return fmt::format("{:.17g}", x);
}

int cmd_approx(const ApproxArgs& args)
{
    const DenseMatrix m       = read_matrix_file(args.matrix);
    const Variant     variant = parse_variant(args.variant);

    return m.visit([&](const auto& a) {
        using T = typename std::decay_t<decltype(a)>::Scalar;
        PivotTrace<T> t;
        switch (variant) {
        case Variant::converge: t = maxvol_rank1(a, args.start_col); break;
        case Variant::fixed4: t = maxvol_fixed_steps(a, args.start_col, 4); break;
        case Variant::max_among_viewed: t = maxvol_max_among_viewed(a, args.start_col, args.k); break;
        }

        fmt::print("pivot: row={} col={} value={}\n", t.result.row, t.result.col, format_value(t.result.value));
        if (t.degenerate)
            fmt::print("residual_cnorm: undefined (zero pivot)\n");
        else
            fmt::print("residual_cnorm: {:.17g}\n", cross_residual_norm(a, t.result));
        fmt::print("steps: {}\nscans: {}\nelements_examined: {}\nconverged: {}\ndegenerate: {}\n", t.steps, t.scans,
                   t.elements_examined, t.converged, t.degenerate);
        if (args.trace) {
            std::size_t next_restart = 0;
            for (std::size_t p = 0; p < t.visited.size(); ++p) {
                const auto& v = t.visited[p];
                bool restart  = next_restart < t.restarts.size() && t.restarts[next_restart] == p;
                if (restart)
                    ++next_restart;
                fmt::print("visit {}: row={} col={} value={}{}\n", p, v.row, v.col, format_value(v.value),
                           restart ? " (restart)" : "");
            }
        }
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
    bounds::BoundInputs   in;
    std::optional<double> m;
    std::optional<double> u_inf;
    std::optional<double> v_inf;
};

void print_probability(const char* name, const bounds::Probability& p)
{
    fmt::print("{}: {:.17g}{}\n", name, p.value, p.vacuous ? fmt::format("  (vacuous, raw {:.6g})", p.raw) : "");
}

int cmd_bounds(BoundsArgs args)
{
    auto& in = args.in;
    in.m     = args.m.value_or(in.n);
    in.u_inf = args.u_inf ? *args.u_inf : bounds::coherent_inf_norm(in.m, in.c);
    in.v_inf = args.v_inf ? *args.v_inf : bounds::coherent_inf_norm(in.n, in.c);

    const auto r = bounds::evaluate_bounds(in);
    fmt::print("inputs: n={} m={} c={} c0={} eps={} delta={} u_inf={:.6g} v_inf={:.6g} k={} tau={}\n", in.n, in.m,
               in.c, in.c0, in.eps, in.delta, in.u_inf, in.v_inf, in.k, in.tau);
    fmt::print("alpha: {:.17g}{}\n", r.alpha, r.alpha_rate_valid ? "" : "  (rate invalid: (4/3)sqrt(c ln n/(n-2)) >= 1)");
    fmt::print("beta(tau): {:.17g}\n", r.beta);
    fmt::print("beta_v: {:.17g}\nbeta_v_upper: {:.17g}\nbeta_u: {:.17g}\n", r.beta_v, r.beta_v_upper, r.beta_u);
    fmt::print("mu1: {:.17g}\nmu2: {:.17g}\n", r.mu1, r.mu2);
    fmt::print("error_bound: {:.17g}\n", r.error_bound_main);
    fmt::print("error_bound_simplified: {:.17g}\n", r.error_bound_simplified);
    fmt::print("error_bound_real: {:.17g}\n", r.error_bound_real);
    fmt::print("error_bound_fixed4: {:.17g}\n", r.error_bound_fixed_steps);
    fmt::print("nu1: {:.17g}\n", r.nu.nu1);
    if (r.nu.nu2_lb)
        fmt::print("nu2_lb: {:.17g}\nnu3_lb: {:.17g}\n", *r.nu.nu2_lb, *r.nu.nu3_lb);
    else
        fmt::print("nu2_lb: undefined (eps = 0)\nnu3_lb: undefined (eps = 0)\n");
    if (r.k_required)
        fmt::print("k_required: {:.17g}{}\n", r.k_required->value, r.k_required->trivial ? "  (any column)" : "");
    else
        fmt::print("k_required: none (beta_v >= 1, vacuous)\n");
    print_probability("lemma1_probability", r.lemma1);
    print_probability("theorem1_probability", r.theorem1);
    if (r.theorem3) {
        const auto& t = *r.theorem3;
        fmt::print("theorem3_eps0: {:.17g}\ntheorem3_mu0: {:.17g}\ntheorem3_tau: {:.17g}\n", t.eps0, t.mu0, t.tau);
        fmt::print("theorem3_gamma: {:.17g}\ntheorem3_gamma_proof: {:.17g}\ntheorem3_alpha0: {:.17g}\n", t.gamma,
                   t.gamma_proof, t.alpha0);
        print_probability("theorem3_probability", t.success);
        if (t.vacuous)
            fmt::print("theorem3_vacuous: true\n");
    } else {
        fmt::print("theorem3: undefined (n - 2 - 2 sqrt(c (n-2) ln n) <= 0)\n");
    }
    print_probability("mu_coherence_probability", r.mu_coherence);
    fmt::print("mu_coherence_failure_union_bound: {:.17g}\n", bounds::mu_coherence_failure_union_bound(in.n, in.c));
    fmt::print("unitary_delta_bound(sigma2=1): {:.17g}\n", r.unitary_delta.bound);
    print_probability("unitary_delta_probability", r.unitary_delta.probability);
    print_probability("unitary_delta_probability_union", r.unitary_delta.probability_union);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
    std::string                  config_path;
    std::optional<std::string>   ratios, variant, start_policy, field, output;
    std::optional<Index>         m, n;
    std::optional<int>           trials, k, threads;
    std::optional<std::uint64_t> seed;
};

int cmd_experiment(const ExperimentArgs& args)
{
    ExperimentConfig cfg;
    bool             seed_seen = false;
    if (!args.config_path.empty())
        cfg = load_config(args.config_path, seed_seen);

    auto set = [&](const char* key, const auto& opt) {
        if (opt)
            apply_setting(cfg, key, fmt::format("{}", *opt));
    };
    set("ratios", args.ratios);
    set("variant", args.variant);
    set("start_policy", args.start_policy);
    set("field", args.field);
    set("output", args.output);
    set("m", args.m);
    set("n", args.n);
    set("trials", args.trials);
    set("k", args.k);
    if (args.seed) {
        cfg.master_seed = *args.seed;
        seed_seen       = true;
    }
    if (!seed_seen)
        throw std::invalid_argument("an explicit --seed (or `seed =` in the config file) is required");
    if (args.threads)
        omp_set_num_threads(*args.threads);

    for (const auto& w : cfg.warnings())
        fmt::print(std::cerr, "warning: {}\n", w);

    const auto result = run_experiment_to_files(cfg);

    fmt::print("{:>10} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}\n", "ratio", "mean_found",
               "min_found", "mean_err", "max_err", "lower_bnd", "err_bound", "p_bad_rand", "p_bad_algo");
    auto opt = [](const std::optional<double>& x) { return x ? fmt::format("{:.5g}", *x) : std::string("n/a"); };
    for (const auto& s : result.summary)
        fmt::print("{:>10.5g} {:>11.5g} {:>11.5g} {:>11.5g} {:>11.5g} {:>11.5g} {:>11.5g} {:>11} {:>11}\n", s.ratio,
                   s.mean_found, s.min_found, s.mean_err, s.max_err, s.lower_bound_curve, s.err_bound_curve,
                   opt(s.p_bad_random), opt(s.p_bad_algo));
    int degenerate = 0;
    for (const auto& s : result.summary)
        degenerate += s.degenerate;
    fmt::print("trials written to {}/trials.csv ({} degenerate)\n", cfg.output_path, degenerate);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle

void print_estimate(const oracle::TailEstimate& e)
{
    fmt::print("value: {:.17g}\nmethod: {}\n", e.value,
               e.method == oracle::Method::quadrature ? "quadrature" : "monte-carlo");
    if (e.std_error)
        fmt::print("samples: {}\nstd_error: {:.6g}\n", e.samples_or_nodes, *e.std_error);
}

int selftest()
{
    bool all = true;
    for (const auto& c : run_selftest()) {
        fmt::print("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
        all = all && c.passed;
    }
    return all ? kExitOk : kExitDomain;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rank-1 maxvol cross approximation toolkit"};
    app.require_subcommand(1);

    ApproxArgs approx;
    auto*      approx_cmd = app.add_subcommand("approx", "run maxvol on a matrix file");
    approx_cmd->add_option("matrix", approx.matrix, "matrix file ('m n field' header)")->required();
    approx_cmd->add_option("--start-col", approx.start_col, "starting column");
    approx_cmd->add_option("--variant", approx.variant, "converge | fixed4 | max-among-viewed");
    approx_cmd->add_option("--k", approx.k, "minimum moves for max-among-viewed");
    approx_cmd->add_flag("--trace", approx.trace, "print every visited pivot");

    BoundsArgs bnd;
    auto*      bounds_cmd = app.add_subcommand("bounds", "evaluate closed-form constants and bounds");
    bounds_cmd->add_option("--n", bnd.in.n, "column dimension (> 2)");
    bounds_cmd->add_option("--m", bnd.m, "row dimension (> 2, default n)");
    bounds_cmd->add_option("--c", bnd.in.c, "tail exponent");
    bounds_cmd->add_option("--c0", bnd.in.c0, "walk constant c0");
    bounds_cmd->add_option("--eps", bnd.in.eps, "noise ratio eps, 0 <= eps <= 1/8");
    bounds_cmd->add_option("--delta", bnd.in.delta, "noise C-norm delta");
    bounds_cmd->add_option("--u-inf", bnd.u_inf, "||u||_inf (default sqrt(2 c ln m / m))");
    bounds_cmd->add_option("--v-inf", bnd.v_inf, "||v||_inf (default sqrt(2 c ln n / n))");
    bounds_cmd->add_option("--k", bnd.in.k, "columns scanned / steps");
    bounds_cmd->add_option("--tau", bnd.in.tau, "coordinate threshold tau");

    ExperimentArgs ex;
    auto*          ex_cmd = app.add_subcommand("experiment", "run the random-matrix Monte Carlo sweep");
    ex_cmd->add_option("--config", ex.config_path, "key = value config file");
    ex_cmd->add_option("--ratios", ex.ratios, "comma-separated ratio grid");
    ex_cmd->add_option("--m", ex.m, "rows");
    ex_cmd->add_option("--n", ex.n, "columns");
    ex_cmd->add_option("--trials", ex.trials, "trials per ratio");
    ex_cmd->add_option("--variant", ex.variant, "converge | fixed4 | max-among-viewed");
    ex_cmd->add_option("--start-policy", ex.start_policy, "random-column | verified-good | scan-k");
    ex_cmd->add_option("--k", ex.k, "scan-k columns / max-among-viewed moves");
    ex_cmd->add_option("--field", ex.field, "real | complex");
    ex_cmd->add_option("--seed", ex.seed, "master seed (required)");
    ex_cmd->add_option("--output", ex.output, "output directory");
    ex_cmd->add_option("--threads", ex.threads, "OpenMP thread count");

    auto* oracle_cmd = app.add_subcommand("oracle", "independent reference computations");
    oracle_cmd->require_subcommand(1);

    int         o_n = 100, o_k = 1;
    double      o_threshold = 1, o_tau = 0.01, o_t = 0.1;
    std::int64_t o_trials   = 100000;
    std::optional<std::uint64_t> o_seed;
    std::string o_matrix;

    auto* chi2_cmd = oracle_cmd->add_subcommand("chi2", "chi-square upper tail by incomplete gamma");
    chi2_cmd->add_option("--n", o_n, "degrees of freedom")->required();
    chi2_cmd->add_option("--threshold", o_threshold, "tail threshold")->required();

    auto* sphere_cmd = oracle_cmd->add_subcommand("sphere-tail", "Monte Carlo P(|v_i| < tau, i < k)");
    sphere_cmd->add_option("--n", o_n, "dimension");
    sphere_cmd->add_option("--tau", o_tau, "threshold");
    sphere_cmd->add_option("--k", o_k, "coordinates");
    sphere_cmd->add_option("--trials", o_trials, "samples (>= 1e4)");
    sphere_cmd->add_option("--seed", o_seed, "seed (required)")->required();

    auto* fisher_cmd = oracle_cmd->add_subcommand("fisher", "Monte Carlo Fisher(1, n-1) tail");
    fisher_cmd->add_option("--n", o_n, "dimension");
    fisher_cmd->add_option("--t", o_t, "level in (0, 1)");
    fisher_cmd->add_option("--trials", o_trials, "samples (>= 1e4)");
    fisher_cmd->add_option("--seed", o_seed, "seed (required)")->required();

    auto* argmax_cmd = oracle_cmd->add_subcommand("argmax", "exhaustive largest-modulus element");
    argmax_cmd->add_option("matrix", o_matrix, "matrix file")->required();

    auto* best_cmd = oracle_cmd->add_subcommand("best-cross", "exhaustive best rank-1 cross");
    best_cmd->add_option("matrix", o_matrix, "matrix file")->required();

    auto* selftest_cmd = app.add_subcommand("selftest", "oracle-versus-bound validation suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    try {
        if (*approx_cmd)
            return cmd_approx(approx);
        if (*bounds_cmd)
            return cmd_bounds(bnd);
        if (*ex_cmd)
            return cmd_experiment(ex);
        if (*selftest_cmd)
            return selftest();
        if (*chi2_cmd) {
            print_estimate(oracle::chi2_tail_exact(o_n, o_threshold));
            return kExitOk;
        }
        if (*sphere_cmd) {
            print_estimate(oracle::sphere_tail_mc(o_n, o_tau, o_k, o_trials, *o_seed));
            return kExitOk;
        }
        if (*fisher_cmd) {
            print_estimate(oracle::fisher_tail_mc(o_n, o_t, o_trials, *o_seed));
            return kExitOk;
        }
        if (*argmax_cmd || *best_cmd) {
            const auto m = read_matrix_file(o_matrix);
            return m.visit([&](const auto& a) {
                if (*argmax_cmd) {
                    auto p = oracle::global_argmax(a);
                    fmt::print("pivot: row={} col={} value={}\n", p.row, p.col, format_value(p.value));
                } else {
                    auto b = oracle::best_cross_residual(a);
                    fmt::print("pivot: row={} col={} value={}\nresidual_cnorm: {:.17g}\n", b.pivot.row, b.pivot.col,
                               format_value(b.pivot.value), b.norm);
                }
                return kExitOk;
            });
        }
    } catch (const IoError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitDomain;
    }
    return kExitDomain;
}
