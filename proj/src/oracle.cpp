#include "rankone/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rankone/random.hpp"

namespace rankone::oracle {

namespace {

constexpr int    kMaxIterations = 100000;
constexpr double kTiny          = 1e-300;
constexpr double kRelTol        = 1e-16;

// P(a, x) by its power series.
double gamma_p_series(double a, double x)
{
    double term = 1.0 / a;
    double sum  = term;
    for (int i = 1; i < kMaxIterations; ++i) {
        term *= x / (a + i);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kRelTol)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw OracleError("incomplete gamma series did not converge (a=" + std::to_string(a) +
                      ", x=" + std::to_string(x) + ")");
}

// Q(a, x) by the modified Lentz continued fraction.
double gamma_q_fraction(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kRelTol)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw OracleError("incomplete gamma continued fraction did not converge (a=" + std::to_string(a) +
                      ", x=" + std::to_string(x) + ")");
}

TailEstimate binomial_estimate(std::int64_t hits, std::int64_t trials)
{
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    TailEstimate e;
    e.value            = p;
    e.method           = Method::monte_carlo;
    e.samples_or_nodes = trials;
    e.std_error        = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return e;
}

void check_trials(std::int64_t trials)
{
    if (trials < 10000)
        throw std::invalid_argument("Monte Carlo oracles need at least 1e4 trials");
}

// Trial range [begin, end) owned by one shard.
std::pair<std::int64_t, std::int64_t> shard_range(std::int64_t trials, int shard)
{
    return {trials * shard / kShards, trials * (shard + 1) / kShards};
}

enum StreamTag : std::uint64_t { kSphereTail = 1, kFisherTail = 2, kCoherence = 3 };

std::int64_t sphere_tail_shard(int n, double tau, int k, std::int64_t trials, std::uint64_t seed, int shard)
{
    auto [begin, end] = shard_range(trials, shard);
    Rng          rng  = make_rng(seed, {kSphereTail, static_cast<std::uint64_t>(shard)});
    std::int64_t hits = 0;
    for (auto t = begin; t < end; ++t) {
        Vector<double> v   = sample_sphere_vector<double>(n, rng);
        bool           all = true;
        for (int i = 0; i < k && all; ++i)
            all = std::abs(v(i)) < tau;
        hits += all ? 1 : 0;
    }
    return hits;
}

std::int64_t fisher_tail_shard(int n, double t, std::int64_t trials, std::uint64_t seed, int shard)
{
    auto [begin, end] = shard_range(trials, shard);
    Rng                              rng = make_rng(seed, {kFisherTail, static_cast<std::uint64_t>(shard)});
    std::normal_distribution<double> g;
    const double                     cut  = t / (1.0 - t);
    std::int64_t                     hits = 0;
    for (auto s = begin; s < end; ++s) {
        const double x1   = g(rng);
        double       rest = 0.0;
        for (int j = 1; j < n; ++j) {
            const double x = g(rng);
            rest += x * x;
        }
        hits += (x1 * x1 < cut * rest) ? 1 : 0;
    }
    return hits;
}

std::int64_t coherence_shard(int n, double mu, std::int64_t trials, std::uint64_t seed, int shard)
{
    auto [begin, end] = shard_range(trials, shard);
    Rng          rng   = make_rng(seed, {kCoherence, static_cast<std::uint64_t>(shard)});
    const double limit = std::sqrt(mu / n);
    std::int64_t hits  = 0;
    for (auto t = begin; t < end; ++t)
        hits += inf_norm(sample_sphere_vector<double>(n, rng)) > limit ? 1 : 0;
    return hits;
}

void check_sphere_args(int n, double tau, int k, std::int64_t trials)
{
    check_trials(trials);
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("need 1 <= k <= n");
    if (!(tau >= 0.0))
        throw std::invalid_argument("tau must be nonnegative");
}

void check_fisher_args(int n, double t, std::int64_t trials)
{
    check_trials(trials);
    if (n < 2)
        throw std::invalid_argument("Fisher oracle needs n >= 2");
    if (!(t > 0.0 && t < 1.0))
        throw std::domain_error("t must lie in (0, 1)");
}

void check_coherence_args(int n, double mu, std::int64_t trials)
{
    check_trials(trials);
    if (n < 1 || !(mu > 0.0))
        throw std::invalid_argument("need n >= 1 and mu > 0");
}

template <typename T>
double residual_norm_at(const Matrix<T>& a, Index pi, Index pj)
{
    const T pivot = a(pi, pj);
    double  worst = 0.0;
    for (Index i = 0; i < a.rows(); ++i) {
        if (i == pi)
            continue;
        const T ratio = a(i, pj) / pivot;
        for (Index j = 0; j < a.cols(); ++j) {
            if (j == pj)
                continue;
            worst = std::max(worst, static_cast<double>(std::abs(a(i, j) - ratio * a(pi, j))));
        }
    }
    return worst;
}

template <typename T>
void check_cross_size(const Matrix<T>& a)
{
    if (a.rows() < 1 || a.cols() < 1)
        throw InvalidDimension("matrix must be nonempty");
    if (static_cast<double>(a.rows()) * static_cast<double>(a.cols()) > 1e6)
        throw TooLarge("exhaustive cross search is limited to m n <= 1e6");
}

// Lexicographically first minimum; zero entries cannot be pivots.
template <typename T>
BestCross<T> pick_best(const Matrix<T>& a, const std::vector<double>& norms)
{
    const Index n    = a.cols();
    std::size_t best = norms.size();
    for (std::size_t f = 0; f < norms.size(); ++f)
        if (norms[f] >= 0.0 && (best == norms.size() || norms[f] < norms[best]))
            best = f;
    if (best == norms.size())
        throw DegeneratePivot("every entry is zero; no cross exists");
    const Index i = static_cast<Index>(best) / n;
    const Index j = static_cast<Index>(best) % n;
    return {Pivot<T>{i, j, a(i, j), static_cast<double>(std::abs(a(i, j)))}, norms[best]};
}

template <typename T>
double norm_or_skip(const Matrix<T>& a, Index i, Index j)
{
    return a(i, j) == T(0) ? -1.0 : residual_norm_at(a, i, j);
}

} // namespace

double gamma_q(double a, double x)
{
    if (!(a > 0.0) || !(x >= 0.0))
        throw std::domain_error("gamma_q needs a > 0 and x >= 0");
    if (x == 0.0)
        return 1.0;
    if (x < a + 1.0)
        return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

TailEstimate chi2_tail_exact(int n, double threshold)
{
    if (n < 1)
        throw std::invalid_argument("chi-square degrees of freedom must be positive");
    if (!(threshold > 0.0))
        throw std::invalid_argument("threshold must be positive");
    TailEstimate e;
    e.value            = std::clamp(gamma_q(0.5 * n, 0.5 * threshold), 0.0, 1.0);
    e.method           = Method::quadrature;
    e.samples_or_nodes = 0;
    return e;
}

TailEstimate sphere_tail_mc(int n, double tau, int k, std::int64_t trials, std::uint64_t seed)
{
    check_sphere_args(n, tau, k, trials);
    std::int64_t hits = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
    for (int s = 0; s < kShards; ++s)
        hits += sphere_tail_shard(n, tau, k, trials, seed, s);
    return binomial_estimate(hits, trials);
}

TailEstimate fisher_tail_mc(int n, double t, std::int64_t trials, std::uint64_t seed)
{
    check_fisher_args(n, t, trials);
    std::int64_t hits = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
    for (int s = 0; s < kShards; ++s)
        hits += fisher_tail_shard(n, t, trials, seed, s);
    return binomial_estimate(hits, trials);
}

TailEstimate coherence_failure_mc(int n, double mu, std::int64_t trials, std::uint64_t seed)
{
    check_coherence_args(n, mu, trials);
    std::int64_t hits = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
    for (int s = 0; s < kShards; ++s)
        hits += coherence_shard(n, mu, trials, seed, s);
    return binomial_estimate(hits, trials);
}

template <typename T>
Pivot<T> global_argmax(const Matrix<T>& a)
{
    if (a.rows() < 1 || a.cols() < 1)
        throw InvalidDimension("matrix must be nonempty");
    Index  bi = 0, bj = 0;
    double top = std::abs(a(0, 0));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > top) {
                top = std::abs(a(i, j));
                bi  = i;
                bj  = j;
            }
    return {bi, bj, a(bi, bj), top};
}

template <typename T>
BestCross<T> best_cross_residual(const Matrix<T>& a)
{
    check_cross_size(a);
    const Index         m = a.rows();
    const Index         n = a.cols();
    std::vector<double> norms(static_cast<std::size_t>(m * n));
#pragma omp parallel for schedule(dynamic)
    for (Index f = 0; f < m * n; ++f)
        norms[static_cast<std::size_t>(f)] = norm_or_skip(a, f / n, f % n);
    return pick_best(a, norms);
}

namespace serial {

TailEstimate sphere_tail_mc(int n, double tau, int k, std::int64_t trials, std::uint64_t seed)
{
    check_sphere_args(n, tau, k, trials);
    std::int64_t hits = 0;
    for (int s = 0; s < kShards; ++s)
        hits += sphere_tail_shard(n, tau, k, trials, seed, s);
    return binomial_estimate(hits, trials);
}

TailEstimate fisher_tail_mc(int n, double t, std::int64_t trials, std::uint64_t seed)
{
    check_fisher_args(n, t, trials);
    std::int64_t hits = 0;
    for (int s = 0; s < kShards; ++s)
        hits += fisher_tail_shard(n, t, trials, seed, s);
    return binomial_estimate(hits, trials);
}

TailEstimate coherence_failure_mc(int n, double mu, std::int64_t trials, std::uint64_t seed)
{
    check_coherence_args(n, mu, trials);
    std::int64_t hits = 0;
    for (int s = 0; s < kShards; ++s)
        hits += coherence_shard(n, mu, trials, seed, s);
    return binomial_estimate(hits, trials);
}

template <typename T>
BestCross<T> best_cross_residual(const Matrix<T>& a)
{
    check_cross_size(a);
    const Index         m = a.rows();
    const Index         n = a.cols();
    std::vector<double> norms(static_cast<std::size_t>(m * n));
    for (Index f = 0; f < m * n; ++f)
        norms[static_cast<std::size_t>(f)] = norm_or_skip(a, f / n, f % n);
    return pick_best(a, norms);
}

template BestCross<double>  best_cross_residual<double>(const Matrix<double>&);
template BestCross<Complex> best_cross_residual<Complex>(const Matrix<Complex>&);

} // namespace serial

template Pivot<double>      global_argmax<double>(const Matrix<double>&);
template Pivot<Complex>     global_argmax<Complex>(const Matrix<Complex>&);
template BestCross<double>  best_cross_residual<double>(const Matrix<double>&);
template BestCross<Complex> best_cross_residual<Complex>(const Matrix<Complex>&);

} // namespace rankone::oracle
