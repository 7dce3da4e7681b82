#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "rankone/matrix.hpp"
#include "rankone/maxvol.hpp"

// Brute-force, quadrature and Monte Carlo references used to check the
// closed-form bounds and the pivot search on small instances.
namespace rankone::oracle {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Method { quadrature, monte_carlo };

struct TailEstimate {
    double                value  = 0.0;
    Method                method = Method::quadrature;
    std::int64_t          samples_or_nodes = 0;
    std::optional<double> std_error; // Monte Carlo only
};

/// Regularized upper incomplete gamma Q(a, x).
/// Series below x = a + 1, Lentz continued fraction above.
double gamma_q(double a, double x);

/// P(chi^2_n > threshold), absolute error below 1e-10.
TailEstimate chi2_tail_exact(int n, double threshold);

/// Monte Carlo samples are split into this many fixed shards; each shard
/// owns the substream derive_seed(seed, {tag, shard}).
inline constexpr int kShards = 64;

/// Empirical P(|v_i| < tau for i = 0..k-1), v uniform on the real unit sphere.
TailEstimate sphere_tail_mc(int n, double tau, int k, std::int64_t trials, std::uint64_t seed);

/// Empirical P(x_1^2 / sum_{j>=2} x_j^2 < t / (1 - t)) for i.i.d. normal x.
TailEstimate fisher_tail_mc(int n, double t, std::int64_t trials, std::uint64_t seed);

/// Empirical fraction of sphere-uniform vectors with ||v||_inf > sqrt(mu / n).
TailEstimate coherence_failure_mc(int n, double mu, std::int64_t trials, std::uint64_t seed);

/// Exhaustive scan; lexicographically smallest (row, col) on ties.
template <typename T>
Pivot<T> global_argmax(const Matrix<T>& a);

template <typename T>
struct BestCross {
    Pivot<T> pivot;
    double   norm = 0.0;
};

/// Pivot minimizing ||A - c a^-1 r||_C over all nonzero entries.
/// O(m^2 n^2); refuses m n > 1e6.
template <typename T>
BestCross<T> best_cross_residual(const Matrix<T>& a);

// Single-threaded references for the OpenMP kernels above.
namespace serial {
TailEstimate sphere_tail_mc(int n, double tau, int k, std::int64_t trials, std::uint64_t seed);
TailEstimate fisher_tail_mc(int n, double t, std::int64_t trials, std::uint64_t seed);
TailEstimate coherence_failure_mc(int n, double mu, std::int64_t trials, std::uint64_t seed);

template <typename T>
BestCross<T> best_cross_residual(const Matrix<T>& a);
} // namespace serial

} // namespace rankone::oracle
