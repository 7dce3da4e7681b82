#include "rankone/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace rankone::bounds {

namespace {

constexpr double pi = std::numbers::pi;

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw DomainError(what);
}

void check_n_c(double n, double c)
{
    require(n > 2.0 && std::isfinite(n), "n must exceed 2");
    require(c > 0.0 && std::isfinite(c), "c must be positive");
}

void check_eps(double eps)
{
    require(eps >= 0.0, "eps must be nonnegative");
    require(eps <= 0.125 + kEpsSlack, fmt::format("eps must satisfy eps <= 1/8 (got {})", eps));
}

// sqrt(1 - 8 eps) with the boundary slack absorbed
double root_term(double eps)
{
    return std::sqrt(std::max(0.0, 1.0 - 8.0 * eps));
}

} // namespace

Probability clamp_probability(double raw)
{
    Probability p;
    p.raw     = raw;
    p.value   = std::clamp(raw, 0.0, 1.0);
    p.vacuous = raw < 0.0 || raw > 1.0;
    return p;
}

double chi2_tail_threshold(double n, double c)
{
    check_n_c(n, c);
    return n - 2.0 + 2.0 * std::sqrt(c * (n - 2.0) * std::log(n));
}

double alpha_const(double n, double c)
{
    check_n_c(n, c);
    const double ln_n     = std::log(n);
    const double prefix   = 1.0 / std::sqrt(pi * (n - 2.0)) + 1.0 / (2.0 * std::sqrt(c * pi * ln_n));
    const double exponent = 4.0 / 3.0 * std::sqrt(c * c * c * ln_n * ln_n * ln_n / (n - 2.0));
    return prefix * std::exp(exponent);
}

bool alpha_rate_valid(double n, double c)
{
    check_n_c(n, c);
    return 4.0 / 3.0 * std::sqrt(c * std::log(n) / (n - 2.0)) < 1.0;
}

double lemma1_beta(double n, double c, double tau)
{
    require(tau >= 0.0, "tau must be nonnegative");
    return std::sqrt(2.0 * tau * tau * chi2_tail_threshold(n, c) / pi);
}

Probability lemma1_probability(double n, double c, double tau, int k)
{
    require(k >= 1, "k must be at least 1");
    const double beta = lemma1_beta(n, c, tau);
    return clamp_probability(1.0 - alpha_const(n, c) * std::pow(n, -c) - std::pow(beta, k));
}

MuThresholds mu_thresholds(double eps)
{
    check_eps(eps);
    const double r = root_term(eps);
    return {(1.0 - r) / 2.0, (1.0 + r) / 2.0};
}

double theorem1_beta_v(double n, double c, double eps, double v_inf)
{
    check_eps(eps);
    require(v_inf > 0.0 && v_inf <= 1.0, "||v||_inf must lie in (0, 1]");
    return (1.0 - root_term(eps)) * v_inf * std::sqrt(chi2_tail_threshold(n, c)) / std::sqrt(2.0 * pi);
}

double theorem1_beta_v_upper(double n, double c, double eps, double v_inf)
{
    check_eps(eps);
    require(v_inf > 0.0 && v_inf <= 1.0, "||v||_inf must lie in (0, 1]");
    return 8.0 * eps * v_inf * std::sqrt(chi2_tail_threshold(n, c)) / std::sqrt(2.0 * pi);
}

Probability theorem1_probability(double n, double c, double eps, double v_inf, int k)
{
    require(k >= 1, "k must be at least 1");
    const double beta_v = theorem1_beta_v(n, c, eps, v_inf);
    return clamp_probability(1.0 - alpha_const(n, c) * std::pow(n, -c) - std::pow(beta_v, k));
}

double theorem1_error_bound(double delta, double eps)
{
    check_eps(eps);
    require(delta >= 0.0, "delta must be nonnegative");
    return 8.0 * delta * (1.0 + eps) / (1.0 + root_term(eps) - 2.0 * eps);
}

double theorem1_error_bound_simplified(double delta, double eps)
{
    check_eps(eps);
    require(delta >= 0.0, "delta must be nonnegative");
    return 4.0 * delta * (1.0 + 16.0 * eps);
}

double theorem1_error_bound_real(double delta, double eps)
{
    check_eps(eps);
    require(delta >= 0.0, "delta must be nonnegative");
    return 4.0 * delta * (1.0 + 4.0 * eps);
}

double theorem1_pivot_lower_bound(double sigma, double u_inf, double v_inf, double delta, double eps)
{
    const double mu2 = mu_thresholds(eps).mu2;
    return sigma * mu2 * mu2 * u_inf * v_inf + delta;
}

RequiredK required_k(double n, double c, double beta_v)
{
    require(n > 1.0, "n must exceed 1");
    require(c > 0.0, "c must be positive");
    require(beta_v < 1.0, "beta_v >= 1: no number of columns makes the bound informative");
    if (beta_v <= 0.0)
        return {1.0, true};
    return {c * std::log(n) / std::log(1.0 / beta_v), false};
}

NuSequence theorem2_nu_sequence(double eps)
{
    check_eps(eps);
    NuSequence s;
    s.nu1 = 4.0 * eps;
    if (s.nu1 == 0.0)
        return s;
    s.nu2_lb = 1.0 - 2.0 * eps / s.nu1;
    s.nu3_lb = 1.0 - 2.0 * eps / *s.nu2_lb;
    return s;
}

double theorem2_error_bound_exact(double delta, double eps)
{
    check_eps(eps);
    require(delta >= 0.0, "delta must be nonnegative");
    return 4.0 * delta * (1.0 + eps) / (1.0 - 5.0 * eps);
}

double theorem2_error_bound(double delta, double eps)
{
    return theorem1_error_bound_simplified(delta, eps);
}

Theorem3Constants theorem3_constants(const Theorem3Inputs& in)
{
    check_n_c(in.n, in.c);
    check_eps(in.eps);
    require(in.c0 > 0.0, "c0 must be positive");
    require(in.u_inf > 0.0 && in.u_inf <= 1.0, "||u||_inf must lie in (0, 1]");
    require(in.v_inf > 0.0 && in.v_inf <= 1.0, "||v||_inf must lie in (0, 1]");
    require(in.k >= 1, "k must be at least 1");

    const double n      = in.n;
    const double ln_n   = std::log(n);
    const double spread = 2.0 * std::sqrt(in.c * (n - 2.0) * ln_n);
    const double lower  = n - 2.0 - spread;
    const double upper  = n - 2.0 + spread;
    require(lower > 0.0, "n - 2 - 2 sqrt(c (n-2) ln n) must be positive");

    const auto mu = mu_thresholds(in.eps);

    Theorem3Constants t;
    t.eps0 = 2.0 * ln_n / n;
    t.mu0  = in.c0 * ln_n / (n * std::sqrt(2.0 * lower / pi));
    // delta / sigma = eps ||u||_inf ||v||_inf
    t.tau         = mu.mu1 * in.u_inf + t.eps0 * in.eps * in.u_inf * in.v_inf / t.mu0;
    t.beta_u      = lemma1_beta(n, in.c, mu.mu1 * in.u_inf);
    t.beta_tau    = lemma1_beta(n, in.c, t.tau);
    t.gamma       = 1.0 - t.beta_u - 2.0 * in.eps * in.u_inf * in.v_inf / in.c0 * (2.0 * upper / pi);
    t.gamma_proof = 1.0 - std::sqrt(2.0 * t.tau * t.tau * lower / pi);
    t.alpha       = alpha_const(n, in.c);
    t.alpha0      = std::exp(t.gamma * in.k * in.k * ln_n * ln_n / (2.0 * n));

    const double walk_term = std::pow(in.c0 * ln_n / n, in.k);
    t.success = clamp_probability(1.0 - 2.0 * t.alpha * std::pow(n, -in.c) -
                                  t.alpha0 * std::pow(n, -t.gamma * in.k) - walk_term);
    t.vacuous = t.gamma <= 0.0 || in.c0 * ln_n >= n || t.success.vacuous;
    return t;
}

Probability mu_coherence_probability(double n, double c)
{
    require(n > 1.0, "n must exceed 1");
    require(c > 0.0, "c must be positive");
    return clamp_probability(1.0 - std::pow(n, -c * (1.0 - 1.0 / n)) / std::sqrt(c * std::log(n)));
}

double mu_coherence_failure_union_bound(double n, double c)
{
    require(n > 1.0, "n must exceed 1");
    require(c > 0.0, "c must be positive");
    return n * std::pow(n, -c * (1.0 - 1.0 / n)) / std::sqrt(c * std::log(n));
}

double coherent_inf_norm(double n, double c)
{
    require(n > 1.0, "n must exceed 1");
    require(c > 0.0, "c must be positive");
    return std::min(1.0, std::sqrt(2.0 * c * std::log(n) / n));
}

DeltaBound delta_bound_coherent(std::span<const double> sigmas, double mu, double m, double n)
{
    require(mu > 0.0, "mu must be positive");
    require(m >= 1.0 && n >= 1.0, "m and n must be positive");
    if (sigmas.size() < 2)
        return {0.0, true};
    double tail = 0.0;
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
        require(sigmas[j] >= 0.0, "singular values must be nonnegative");
        require(j == 0 || sigmas[j] <= sigmas[j - 1], "singular values must be nonincreasing");
        if (j >= 1)
            tail += sigmas[j];
    }
    return {mu / std::sqrt(m * n) * tail, false};
}

UnitaryDeltaBound delta_bound_unitary(double sigma2, double c, double m, double n)
{
    require(m > 1.0, "m must exceed 1");
    require(n >= 1.0, "n must be positive");
    require(c > 0.0, "c must be positive");
    require(sigma2 >= 0.0, "sigma_2 must be nonnegative");
    const double ln_m = std::log(m);
    UnitaryDeltaBound b;
    b.bound       = std::sqrt(2.0 * c * ln_m / m) * sigma2;
    b.probability       = clamp_probability(1.0 - n * std::pow(m, -c * (1.0 - 1.0 / m)) / std::sqrt(c * ln_m));
    b.probability_union = clamp_probability(1.0 - n * mu_coherence_failure_union_bound(m, c));
    return b;
}

double worst_case_bound(double d)
{
    require(d >= 0.0, "normalized delta must be nonnegative");
    return (1.0 + d + std::sqrt((1.0 + d) * (1.0 + 17.0 * d))) / 2.0;
}

void BoundInputs::validate() const
{
    require(n > 2.0, "n must exceed 2");
    require(m > 2.0, "m must exceed 2");
    require(c > 0.0, "c must be positive");
    require(c0 > 0.0, "c0 must be positive");
    check_eps(eps);
    require(delta >= 0.0, "delta must be nonnegative");
    require(u_inf > 0.0 && u_inf <= 1.0, "||u||_inf must lie in (0, 1]");
    require(v_inf > 0.0 && v_inf <= 1.0, "||v||_inf must lie in (0, 1]");
    require(k >= 1, "k must be at least 1");
    require(tau >= 0.0, "tau must be nonnegative");
}

BoundReport evaluate_bounds(const BoundInputs& in)
{
    in.validate();

    BoundReport r;
    r.alpha            = alpha_const(in.n, in.c);
    r.alpha_rate_valid = alpha_rate_valid(in.n, in.c);
    r.beta             = lemma1_beta(in.n, in.c, in.tau);
    r.beta_v           = theorem1_beta_v(in.n, in.c, in.eps, in.v_inf);
    r.beta_v_upper     = theorem1_beta_v_upper(in.n, in.c, in.eps, in.v_inf);
    r.beta_u           = theorem1_beta_v(in.m, in.c, in.eps, in.u_inf);

    const auto mu = mu_thresholds(in.eps);
    r.mu1 = mu.mu1;
    r.mu2 = mu.mu2;

    r.error_bound_main        = theorem1_error_bound(in.delta, in.eps);
    r.error_bound_simplified  = theorem1_error_bound_simplified(in.delta, in.eps);
    r.error_bound_real        = theorem1_error_bound_real(in.delta, in.eps);
    r.error_bound_fixed_steps = theorem2_error_bound(in.delta, in.eps);
    r.nu                      = theorem2_nu_sequence(in.eps);
    if (r.beta_v < 1.0)
        r.k_required = required_k(in.n, in.c, r.beta_v);

    r.lemma1   = lemma1_probability(in.n, in.c, in.tau, in.k);
    r.theorem1 = theorem1_probability(in.n, in.c, in.eps, in.v_inf, in.k);
    try {
        r.theorem3 = theorem3_constants({in.n, in.c, in.c0, in.eps, in.u_inf, in.v_inf, in.k});
    } catch (const DomainError&) {
        r.theorem3.reset();
    }
    r.mu_coherence  = mu_coherence_probability(in.n, in.c);
    r.unitary_delta = delta_bound_unitary(1.0, in.c, in.m, in.n);
    return r;
}

} // namespace rankone::bounds
