#include <doctest.h>

#include <omp.h>

#include <boost/math/special_functions/gamma.hpp>

#include "rankone/bounds.hpp"
#include "rankone/maxvol.hpp"
#include "rankone/model.hpp"
#include "rankone/oracle.hpp"
#include "rankone/random.hpp"

using namespace rankone;

TEST_CASE("incomplete gamma against Boost")
{
    double worst = 0;
    for (double a : {0.5, 1.0, 2.5, 5.0, 50.0, 250.0})
        for (double x : {1e-3, 0.1, 0.9, 1.0, 2.0, 4.9, 5.0, 10.0, 49.0, 60.0, 240.0, 300.0})
            worst = std::max(worst, std::abs(oracle::gamma_q(a, x) - boost::math::gamma_q(a, x)));
    CHECK(worst <= 1e-12);
    CHECK(oracle::gamma_q(3, 0) == 1);
    CHECK_THROWS(oracle::gamma_q(0, 1));
    CHECK_THROWS(oracle::gamma_q(1, -1));
}

TEST_CASE("chi-square tail closed forms")
{
    for (double t : {0.5, 1.0, 5.0, 20.0}) {
        CHECK(std::abs(oracle::chi2_tail_exact(2, t).value - std::exp(-t / 2)) <= 1e-10);
        CHECK(std::abs(oracle::chi2_tail_exact(4, t).value - std::exp(-t / 2) * (1 + t / 2)) <= 1e-10);
    }
    const auto e = oracle::chi2_tail_exact(100, bounds::chi2_tail_threshold(100, 2));
    CHECK(e.method == oracle::Method::quadrature);
    CHECK_FALSE(e.std_error);
    CHECK(e.value <= bounds::alpha_const(100, 2) * 1e-4);
    CHECK_THROWS(oracle::chi2_tail_exact(0, 1));
    CHECK_THROWS(oracle::chi2_tail_exact(3, 0));
}

TEST_CASE("sphere tail oracle")
{
    CHECK(oracle::sphere_tail_mc(20, 1.0, 3, 10000, 1).value == 1.0);
    CHECK(oracle::sphere_tail_mc(20, 0.0, 3, 10000, 1).value == 0.0);
    const auto e = oracle::sphere_tail_mc(100, 0.02, 3, 100000, 2);
    CHECK(e.method == oracle::Method::monte_carlo);
    REQUIRE(e.std_error);
    const double bound = bounds::alpha_const(100, 2) * 1e-4 + std::pow(bounds::lemma1_beta(100, 2, 0.02), 3);
    CHECK(e.value <= bound + 3 * *e.std_error);
    CHECK_THROWS(oracle::sphere_tail_mc(20, 0.1, 3, 9999, 1));
    CHECK_THROWS(oracle::sphere_tail_mc(20, 0.1, 21, 10000, 1));
}

TEST_CASE("Fisher tail oracle")
{
    CHECK(oracle::fisher_tail_mc(50, 1 - 1e-12, 10000, 3).value == 1.0);
    CHECK(oracle::fisher_tail_mc(50, 1e-12, 10000, 3).value <= 1e-3);
    CHECK_THROWS_AS(oracle::fisher_tail_mc(50, 1.0, 10000, 3), std::domain_error);
    CHECK_THROWS_AS(oracle::fisher_tail_mc(50, 0.0, 10000, 3), std::domain_error);

    // per-coordinate failure, times n, within the union bound
    const int    n = 100;
    const double c = 2, t = 2 * c * std::log(double(n)) / n;
    const auto   e = oracle::fisher_tail_mc(n, t, 200000, 4);
    CHECK(n * (1 - e.value) <= bounds::mu_coherence_failure_union_bound(n, c) + 3 * n * *e.std_error);
}

TEST_CASE("coherence oracle")
{
    const auto e = oracle::coherence_failure_mc(100, 4 * std::log(100.0), 100000, 5);
    CHECK(e.value <= bounds::mu_coherence_failure_union_bound(100, 2) + 3 * *e.std_error);
    CHECK(oracle::coherence_failure_mc(10, 10, 10000, 5).value == 0.0);
}

TEST_CASE("global argmax")
{
    Matrix<double> a(2, 2);
    a << 1, 2, 3, 4;
    auto p = oracle::global_argmax(a);
    CHECK(p.row == 1);
    CHECK(p.col == 1);
    CHECK(p.value == 4);
    auto q = oracle::global_argmax(Matrix<double>(Matrix<double>::Constant(3, 3, 2.0)));
    CHECK(q.row == 0);
    CHECK(q.col == 0);
}

TEST_CASE("best cross residual")
{
    SUBCASE("2x2 enumeration")
    {
        Matrix<double> a(2, 2);
        a << 1, 2, 3, 4;
        // residual at (i, j) is |a_{i'j'} - a_{i'j} a_{ij'} / a_{ij}|
        double best = 1e300;
        Index  bi = 0, bj = 0;
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 2; ++j) {
                const double r = std::abs(a(1 - i, 1 - j) - a(1 - i, j) * a(i, 1 - j) / a(i, j));
                if (r < best) {
                    best = r;
                    bi   = i;
                    bj   = j;
                }
            }
        const auto b = oracle::best_cross_residual(a);
        CHECK(b.pivot.row == bi);
        CHECK(b.pivot.col == bj);
        CHECK(b.norm == doctest::Approx(best));
    }
    SUBCASE("exact rank one")
    {
        Vector<double> u(3), v(4);
        u << 0, 1, 2;
        v << 1, 0, 3, 1;
        Matrix<double> a = u * v.transpose();
        const auto     b = oracle::best_cross_residual(a);
        CHECK(b.norm == 0);
        CHECK(b.pivot.row == 1);
        CHECK(b.pivot.col == 0);
    }
    SUBCASE("minimum over every pivot")
    {
        Rng                              rng = make_rng(41, {});
        std::normal_distribution<double> g;
        for (int rep = 0; rep < 20; ++rep) {
            Matrix<double> a(6, 5);
            for (Index j = 0; j < 5; ++j)
                for (Index i = 0; i < 6; ++i)
                    a(i, j) = g(rng);
            const auto b = oracle::best_cross_residual(a);
            for (Index i = 0; i < 6; ++i)
                for (Index j = 0; j < 5; ++j) {
                    Pivot<double> p{i, j, a(i, j), std::abs(a(i, j))};
                    CHECK(b.norm <= cross_residual(a, p).norm * (1 + 1e-12));
                }
        }
    }
    SUBCASE("20x20 ratio model")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            Rng  rng   = make_rng(42, {s});
            auto m     = build_ratio_model<double>({16.0, 20, 20, Field::real}, rng);
            auto mu    = mu_thresholds(m.epsilon());
            Index start = 0;
            while (std::abs(m.v()(start)) <= mu.mu1 * m.v_inf())
                ++start;
            const auto t = maxvol_rank1(m.a(), start);
            const auto r = cross_residual_norm(m.a(), t.result);
            const auto b = oracle::best_cross_residual(m.a());
            CHECK(r <= bounds::theorem1_error_bound(m.delta(), m.epsilon()));
            CHECK(b.norm <= r * (1 + 1e-12));
        }
    }
    SUBCASE("size guard")
    {
        CHECK_THROWS_AS(oracle::best_cross_residual(Matrix<double>(Matrix<double>::Ones(1001, 1000))),
                        oracle::TooLarge);
    }
}

TEST_CASE("parallel oracles equal their serial references")
{
    Rng                              rng = make_rng(43, {});
    std::normal_distribution<double> g;
    Matrix<Complex>                  a(9, 11);
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            a(i, j) = {g(rng), g(rng)};
    for (int threads : {1, 3}) {
        omp_set_num_threads(threads);
        auto p = oracle::best_cross_residual(a);
        auto s = oracle::serial::best_cross_residual(a);
        CHECK(p.pivot.row == s.pivot.row);
        CHECK(p.pivot.col == s.pivot.col);
        CHECK(p.norm == s.norm);
        CHECK(oracle::sphere_tail_mc(30, 0.2, 2, 20000, 9).value ==
              oracle::serial::sphere_tail_mc(30, 0.2, 2, 20000, 9).value);
        CHECK(oracle::fisher_tail_mc(30, 0.05, 20000, 9).value == oracle::serial::fisher_tail_mc(30, 0.05, 20000, 9).value);
        CHECK(oracle::coherence_failure_mc(30, 6, 20000, 9).value ==
              oracle::serial::coherence_failure_mc(30, 6, 20000, 9).value);
    }
}
