#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankone/matrix.hpp"

//
// Closed-form constants and bounds for rank-1 maxvol on A = sigma u v^* + E.
//
// Notation: n columns (m rows), c the tail exponent, eps the noise-to-signal
// ratio ||E||_C / (sigma ||u||_inf ||v||_inf), delta = ||E||_C.
// Every function checks its domain and throws DomainError instead of
// returning NaN. Probabilities are clamped to [0, 1]; `vacuous` records
// that the raw expression fell outside that range.
//
namespace rankone::bounds {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Slack on the eps <= 1/8 boundary; models generated at ratio 8 land on
/// 1/8 up to rounding.
inline constexpr double kEpsSlack = 1e-12;

struct Probability {
    double value   = 0.0; // clamped to [0, 1]
    double raw     = 0.0;
    bool   vacuous = false;
};

Probability clamp_probability(double raw);

/// n - 2 + 2 sqrt(c (n-2) ln n): the chi-square(n) level exceeded with
/// probability at most alpha n^-c.
double chi2_tail_threshold(double n, double c);

double alpha_const(double n, double c);

/// The alpha n^-c rate is a genuine decay only while
/// (4/3) sqrt(c ln n / (n-2)) < 1.
bool alpha_rate_valid(double n, double c);

/// beta = sqrt(2 tau^2 (n - 2 + 2 sqrt(c (n-2) ln n)) / pi)
double lemma1_beta(double n, double c, double tau);

/// 1 - alpha n^-c - beta^k: chance that one of k fixed coordinates of a
/// sphere-uniform vector reaches modulus tau.
Probability lemma1_probability(double n, double c, double tau, int k);

struct MuThresholds {
    double mu1 = 0.0;
    double mu2 = 1.0;
};

/// Roots of mu^2 - mu + 2 eps = 0, eps in [0, 1/8].
MuThresholds mu_thresholds(double eps);

double theorem1_beta_v(double n, double c, double eps, double v_inf);

/// 8 eps ||v||_inf sqrt(...) / sqrt(2 pi): upper form of beta_v, also the
/// beta_v of the fixed four-step variant.
double theorem1_beta_v_upper(double n, double c, double eps, double v_inf);

/// 1 - alpha n^-c - beta_v^k
Probability theorem1_probability(double n, double c, double eps, double v_inf, int k);

/// 8 delta (1 + eps) / (1 + sqrt(1 - 8 eps) - 2 eps)
double theorem1_error_bound(double delta, double eps);

/// 4 delta (1 + 16 eps)
double theorem1_error_bound_simplified(double delta, double eps);

/// 4 delta (1 + 4 eps), real matrices
double theorem1_error_bound_real(double delta, double eps);

/// sigma mu2^2 ||u||_inf ||v||_inf + delta, the guaranteed modulus of the
/// pivot reached from a good column.
double theorem1_pivot_lower_bound(double sigma, double u_inf, double v_inf, double delta, double eps);

struct RequiredK {
    double value   = 1.0;
    bool   trivial = false; // beta_v <= 0: a single column suffices
};

/// c ln n / ln(1 / beta_v), real-valued.
RequiredK required_k(double n, double c, double beta_v);

struct NuSequence {
    double                nu1 = 0.0;
    std::optional<double> nu2_lb; // empty when nu1 = 0
    std::optional<double> nu3_lb;
};

/// nu1 = 4 eps, nu_{k+1} >= 1 - 2 eps / nu_k.
NuSequence theorem2_nu_sequence(double eps);

/// 4 delta (1 + eps) / (nu3 - eps) = 4 delta (1 + eps) / (1 - 5 eps)
double theorem2_error_bound_exact(double delta, double eps);

/// 4 delta (1 + 16 eps)
double theorem2_error_bound(double delta, double eps);

struct Theorem3Inputs {
    double n     = 100;
    double c     = 2;
    double c0    = 10;
    double eps   = 0.125;
    double u_inf = 1;
    double v_inf = 1;
    int    k     = 1;
};

struct Theorem3Constants {
    double      eps0        = 0.0; // 2 ln n / n
    double      mu0         = 0.0; // c0 ln n / (n sqrt(2 (n - 2 - 2 sqrt(c (n-2) ln n)) / pi))
    double      tau         = 0.0; // mu1 ||u||_inf + eps0 delta / (sigma mu0)
    double      beta_u      = 0.0; // sphere coordinate beta at tau = mu1 ||u||_inf
    double      beta_tau    = 0.0; // sphere coordinate beta at the full tau
    double      gamma       = 0.0; // 1 - beta_u - (2 eps ||u|| ||v|| / c0) 2 (n - 2 + 2 sqrt(...)) / pi
    double      gamma_proof = 0.0; // 1 - sqrt(2 tau^2 (n - 2 - 2 sqrt(...)) / pi)
    double      alpha       = 0.0;
    double      alpha0      = 0.0; // exp(gamma k^2 ln^2 n / (2 n))
    Probability success;           // 1 - 2 alpha n^-c - alpha0 n^(-gamma k) - (c0 ln n / n)^k
    bool        vacuous = false;   // gamma <= 0, c0 ln n >= n, or success clamped
};

Theorem3Constants theorem3_constants(const Theorem3Inputs& in);

/// ||v||_inf <= sqrt(mu / n)
template <typename Derived>
bool mu_coherence_check(const Eigen::MatrixBase<Derived>& v, double mu)
{
    if (v.size() < 1)
        throw DomainError("mu-coherence needs a nonempty vector");
    if (!(mu > 0.0))
        throw DomainError("mu must be positive");
    return inf_norm(v) <= std::sqrt(mu / static_cast<double>(v.size()));
}

/// 1 - n^(-c (1 - 1/n)) / sqrt(c ln n): chance a sphere-uniform vector is
/// mu-coherent with mu = 2 c ln n.
Probability mu_coherence_probability(double n, double c);

/// n^{1-c(1-1/n)} / sqrt(c ln n): failure bound keeping the factor n from the
/// union over coordinates.
double mu_coherence_failure_union_bound(double n, double c);

/// min(1, sqrt(2 c ln n / n)): the sup-norm of a mu-coherent unit vector at
/// mu = 2 c ln n.
double coherent_inf_norm(double n, double c);

struct DeltaBound {
    double value      = 0.0;
    bool   degenerate = false; // fewer than two singular values
};

/// (mu / sqrt(m n)) sum_{j >= 2} sigma_j
DeltaBound delta_bound_coherent(std::span<const double> sigmas, double mu, double m, double n);

struct UnitaryDeltaBound {
    double      bound = 0.0;       // sqrt(2 c ln m / m) sigma_2
    Probability probability;       // 1 - n m^(-c (1 - 1/m)) / sqrt(c ln m), as stated
    Probability probability_union; // 1 - n m^(1 - c (1 - 1/m)) / sqrt(c ln m), union over all m n entries
};

UnitaryDeltaBound delta_bound_unitary(double sigma2, double c, double m, double n);

/// (1 + d + sqrt((1 + d)(1 + 17 d))) / 2 with d = delta in units where
/// sigma ||u||_inf ||v||_inf = 1.
double worst_case_bound(double delta_normalized);

/// Fraction of entries with |v_i| <= mu1 ||v||_inf.
template <typename Derived>
double large_entry_fraction(const Eigen::MatrixBase<Derived>& v, double eps)
{
    const double top = inf_norm(v);
    if (v.size() < 1 || top == 0.0)
        throw DomainError("bad-entry fraction is undefined for a zero vector");
    const double cut = mu_thresholds(eps).mu1 * top;
    Index        bad = 0;
    for (Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) <= cut)
            ++bad;
    return static_cast<double>(bad) / static_cast<double>(v.size());
}

//
// Aggregate evaluation.
//
struct BoundInputs {
    double n     = 100;
    double m     = 100;
    double c     = 2;
    double c0    = 10;
    double eps   = 0.125;
    double delta = 1;
    double u_inf = 1;
    double v_inf = 1;
    int    k     = 1;
    double tau   = 0;

    /// Throws DomainError naming the first violated constraint.
    void validate() const;
};

struct BoundReport {
    double            alpha = 0.0;
    bool              alpha_rate_valid = false;
    double            beta = 0.0; // sphere coordinate beta at tau
    double            beta_v = 0.0;
    double            beta_v_upper = 0.0;
    double            beta_u = 0.0;
    double            mu1 = 0.0;
    double            mu2 = 0.0;
    double            error_bound_main = 0.0;
    double            error_bound_simplified = 0.0;
    double            error_bound_real = 0.0;
    double            error_bound_fixed_steps = 0.0;
    NuSequence        nu;
    std::optional<RequiredK> k_required; // empty when beta_v >= 1
    Probability       lemma1;
    Probability       theorem1;
    std::optional<Theorem3Constants> theorem3; // empty when n is too small for the given c
    Probability       mu_coherence;
    UnitaryDeltaBound unitary_delta; // at sigma_2 = 1
};

BoundReport evaluate_bounds(const BoundInputs& in);

} // namespace rankone::bounds

namespace rankone {
using bounds::mu_thresholds;
}
