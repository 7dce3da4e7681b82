#include "rankone/selftest.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rankone/bounds.hpp"
#include "rankone/maxvol.hpp"
#include "rankone/oracle.hpp"

namespace rankone {

namespace {

void chi2_tail_checks(std::vector<CheckResult>& out)
{
    const std::pair<int, double> cases[] = {{10, 1}, {50, 1}, {100, 2}, {500, 3}};
    for (auto [n, c] : cases) {
        const double t     = bounds::chi2_tail_threshold(n, c);
        const double tail  = oracle::chi2_tail_exact(n, t).value;
        const double bound = bounds::alpha_const(n, c) * std::pow(n, -c);
        const bool   valid = bounds::alpha_rate_valid(n, c);
        out.push_back({fmt::format("chi-square tail bound n={} c={}", n, c), !valid || tail <= bound,
                       fmt::format("tail={:.6e} bound={:.6e}{}", tail, bound, valid ? "" : " (rate invalid)")});
    }
}

void closed_form_checks(std::vector<CheckResult>& out)
{
    double worst = 0.0;
    for (double t : {0.5, 1.0, 5.0, 20.0}) {
        worst = std::max(worst, std::abs(oracle::chi2_tail_exact(2, t).value - std::exp(-t / 2)));
        worst = std::max(worst, std::abs(oracle::chi2_tail_exact(4, t).value - std::exp(-t / 2) * (1 + t / 2)));
    }
    out.push_back({"chi-square closed forms n=2,4", worst <= 1e-10, fmt::format("max abs error {:.3e}", worst)});
}

void mu_identity_checks(std::vector<CheckResult>& out)
{
    double sum_err = 0.0, prod_err = 0.0, beta_err = 0.0;
    const int grid = 10000;
    for (int i = 0; i <= grid; ++i) {
        const double eps = 0.125 * i / grid;
        const auto   mu  = bounds::mu_thresholds(eps);
        sum_err  = std::max(sum_err, std::abs(mu.mu1 + mu.mu2 - 1.0));
        prod_err = std::max(prod_err, std::abs(mu.mu1 * mu.mu2 - 2.0 * eps));
        const double v_inf = 0.3;
        beta_err = std::max(beta_err, std::abs(bounds::theorem1_beta_v(100, 2, eps, v_inf) -
                                               bounds::lemma1_beta(100, 2, mu.mu1 * v_inf)));
    }
    out.push_back({"mu1 + mu2 = 1", sum_err <= 1e-12, fmt::format("max error {:.3e}", sum_err)});
    out.push_back({"mu1 mu2 = 2 eps", prod_err <= 1e-12, fmt::format("max error {:.3e}", prod_err)});
    out.push_back({"beta_v = sphere beta at mu1 ||v||", beta_err <= 1e-12, fmt::format("max error {:.3e}", beta_err)});
}

void constant_checks(std::vector<CheckResult>& out)
{
    const double main = bounds::theorem1_error_bound(1, 0.125);
    const double real = bounds::theorem1_error_bound_real(1, 0.125);
    out.push_back({"error bound at eps=1/8 is 12 delta", std::abs(main - 12) <= 1e-12, fmt::format("{:.17g}", main)});
    out.push_back({"real error bound at eps=1/8 is 6 delta", std::abs(real - 6) <= 1e-12, fmt::format("{:.17g}", real)});
}

void monte_carlo_checks(std::vector<CheckResult>& out, std::uint64_t seed)
{
    const int          n      = 100;
    const double       c      = 2;
    const std::int64_t trials = 20000;
    for (double tau : {0.01, 0.02}) {
        const int  k   = 3;
        const auto est = oracle::sphere_tail_mc(n, tau, k, trials, seed);
        const double bound =
            bounds::alpha_const(n, c) * std::pow(n, -c) + std::pow(bounds::lemma1_beta(n, c, tau), k);
        out.push_back({fmt::format("sphere coordinate tail tau={} k={}", tau, k),
                       est.value <= bound + 3 * *est.std_error,
                       fmt::format("estimate={:.4e} bound={:.4e}", est.value, bound)});
    }
    const double mu    = 2 * c * std::log(n);
    const auto   fail  = oracle::coherence_failure_mc(n, mu, trials, seed);
    const double stated = 1.0 - bounds::mu_coherence_probability(n, c).raw;
    const double bound  = bounds::mu_coherence_failure_union_bound(n, c);
    out.push_back({"mu-coherence failure rate (union bound)", fail.value <= bound + 3 * *fail.std_error,
                   fmt::format("estimate={:.4e} bound={:.4e} stated-without-n={:.4e}", fail.value, bound, stated)});
}

void maxvol_checks(std::vector<CheckResult>& out)
{
    Matrix<double> a(3, 3);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 10;
    const auto t  = maxvol_rank1(a, 0);
    const bool ok = t.converged && t.result.row == 2 && t.result.col == 2 && t.steps == 2;
    out.push_back({"maxvol 3x3 hand example", ok,
                   fmt::format("pivot ({},{})={} steps={}", t.result.row, t.result.col, t.result.value, t.steps)});
}

} // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed)
{
    std::vector<CheckResult> out;
    chi2_tail_checks(out);
    closed_form_checks(out);
    mu_identity_checks(out);
    constant_checks(out);
    monte_carlo_checks(out, seed);
    maxvol_checks(out);
    return out;
}

} // namespace rankone
