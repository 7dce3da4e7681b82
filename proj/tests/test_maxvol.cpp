#include <doctest.h>

#include <vector>

#include "rankone/maxvol.hpp"
#include "rankone/model.hpp"
#include "rankone/oracle.hpp"
#include "rankone/random.hpp"

using namespace rankone;

namespace {

Matrix<double> hand_matrix()
{
    Matrix<double> a(3, 3);
    a << 1, 2, 3, 4, 5, 6, 7, 8, 10;
    return a;
}

// Brute-force check that (i, j) is maximal in its row and column.
template <typename T>
bool maximal_by_scan(const Matrix<T>& a, Index i, Index j)
{
    for (Index r = 0; r < a.rows(); ++r)
        if (std::abs(a(r, j)) > std::abs(a(i, j)))
            return false;
    for (Index c = 0; c < a.cols(); ++c)
        if (std::abs(a(i, c)) > std::abs(a(i, j)))
            return false;
    return true;
}

template <typename T>
Index first_argmax_in_column(const Matrix<T>& a, Index j)
{
    Index best = 0;
    for (Index i = 1; i < a.rows(); ++i)
        if (std::abs(a(i, j)) > std::abs(a(best, j)))
            best = i;
    return best;
}

} // namespace

TEST_CASE("hand example from column 0")
{
    const auto t = maxvol_rank1(hand_matrix(), 0);
    REQUIRE(t.visited.size() == 2);
    CHECK(t.visited[0].row == 2);
    CHECK(t.visited[0].col == 0);
    CHECK(t.visited[0].value == 7);
    CHECK(t.visited[1].row == 2);
    CHECK(t.visited[1].col == 2);
    CHECK(t.result.value == 10);
    CHECK(t.steps == 2);
    CHECK(t.converged);
    CHECK_FALSE(t.degenerate);
}

TEST_CASE("hand example, one fixed step from column 1")
{
    const auto t = maxvol_fixed_steps(hand_matrix(), 1, 1);
    CHECK(t.result.row == 2);
    CHECK(t.result.col == 1);
    CHECK(t.result.value == 8);
    CHECK(t.steps == 1);
    CHECK_FALSE(t.converged);
}

TEST_CASE("global maximum in the start column")
{
    Matrix<double> a(3, 4);
    a << 1, 2, 3, 4, 9, -1, 0, 2, 3, 3, 3, 3;
    const auto t = maxvol_rank1(a, 0);
    CHECK(t.converged);
    CHECK(t.result.row == 1);
    CHECK(t.result.col == 0);
    CHECK(t.steps <= 2);
}

TEST_CASE("1x1 matrix")
{
    Matrix<double> a(1, 1);
    a << -3;
    const auto t = maxvol_rank1(a, 0);
    CHECK(t.converged);
    CHECK(t.steps == 1);
    CHECK(t.result.row == 0);
    CHECK(t.result.col == 0);
    CHECK(t.result.abs_value == 3);
}

TEST_CASE("degenerate and invalid inputs")
{
    const Matrix<double> z = Matrix<double>::Zero(3, 3);
    const auto           t = maxvol_rank1(z, 1);
    CHECK(t.degenerate);
    CHECK_FALSE(t.converged);
    CHECK(t.result.value == 0);
    CHECK_THROWS_AS(cross_residual(z, t.result), DegeneratePivot);
    CHECK_THROWS_AS(cross_residual_norm(z, t.result), DegeneratePivot);

    CHECK_THROWS_AS(maxvol_rank1(hand_matrix(), 3), std::out_of_range);
    CHECK_THROWS_AS(maxvol_rank1(hand_matrix(), -1), std::out_of_range);
    CHECK_THROWS_AS(maxvol_rank1(hand_matrix(), 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(maxvol_fixed_steps(hand_matrix(), 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(maxvol_max_among_viewed(hand_matrix(), 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(maxvol_rank1(Matrix<double>(0, 0), 0), InvalidDimension);
}

TEST_CASE("ties go to the smallest index")
{
    Matrix<double> a(3, 3);
    a << 5, 5, 1, 5, 5, 1, 1, 1, 1;
    const auto t = maxvol_rank1(a, 2);
    CHECK(t.visited.front().row == 0);
    CHECK(t.visited.front().col == 2);
    CHECK(t.result.row == 0);
    CHECK(t.result.col == 0);
    CHECK(t.converged);
}

TEST_CASE("scan_start_column")
{
    const auto a = hand_matrix();
    CHECK(scan_start_column(a, 3) == 2);
    CHECK(scan_start_column(a, 1) == 0);
    Matrix<double> b(2, 2);
    b << 1, 5, 3, 2;
    CHECK(scan_start_column(b, 2) == 1);
    CHECK_THROWS_AS(scan_start_column(b, 0), std::invalid_argument);
    CHECK_THROWS_AS(scan_start_column(b, 3), std::invalid_argument);

    std::vector<Index> cols = {1, 0};
    CHECK(scan_start_column(a, std::span<const Index>(cols)) == 1);
    std::vector<Index> bad = {5};
    CHECK_THROWS_AS(scan_start_column(a, std::span<const Index>(bad)), std::out_of_range);
}

TEST_CASE("fixed steps")
{
    Rng                              rng = make_rng(21, {});
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 200; ++rep) {
        Matrix<double> a(9, 6);
        for (Index j = 0; j < a.cols(); ++j)
            for (Index i = 0; i < a.rows(); ++i)
                a(i, j) = g(rng);
        const Index start = sample_index(a.cols(), rng);
        const auto  four  = maxvol_fixed_steps(a, start, 4);
        const auto  full  = maxvol_rank1(a, start);
        CHECK(four.steps <= 4);
        CHECK(four.elements_examined <= 2 * a.rows() + 2 * a.cols());
        if (full.steps <= 4) {
            CHECK(four.result.row == full.result.row);
            CHECK(four.result.col == full.result.col);
        }
    }
}

TEST_CASE("max among viewed")
{
    SUBCASE("hand matrix restarts and keeps the best element")
    {
        const auto a    = hand_matrix();
        const auto base = maxvol_rank1(a, 0);
        const auto t    = maxvol_max_among_viewed(a, 0, 4);
        CHECK_FALSE(t.restarts.empty());
        CHECK(t.result.abs_value >= base.result.abs_value);
        CHECK(t.steps >= 4);
    }
    SUBCASE("k no larger than the converged step count changes nothing")
    {
        Rng                              rng = make_rng(22, {});
        std::normal_distribution<double> g;
        for (int rep = 0; rep < 200; ++rep) {
            Matrix<double> a(8, 8);
            for (Index j = 0; j < 8; ++j)
                for (Index i = 0; i < 8; ++i)
                    a(i, j) = g(rng);
            const Index start = sample_index(8, rng);
            const auto  base  = maxvol_rank1(a, start);
            const auto  t     = maxvol_max_among_viewed(a, start, base.steps);
            CHECK(t.restarts.empty());
            CHECK(t.result.row == base.result.row);
            CHECK(t.result.col == base.result.col);

            const auto one = maxvol_max_among_viewed(a, start, 1);
            CHECK(one.result.abs_value == base.result.abs_value);

            const auto more = maxvol_max_among_viewed(a, start, 6);
            CHECK(more.result.abs_value >= base.result.abs_value);
            double best = 0;
            for (const auto& p : more.visited)
                best = std::max(best, p.abs_value);
            CHECK(more.result.abs_value == best);
        }
    }
}

TEST_CASE("cross residual")
{
    SUBCASE("2x2 example")
    {
        Matrix<double> a(2, 2);
        a << 1, 2, 3, 4;
        Pivot<double> p{0, 0, 1.0, 1.0};
        const auto    r = cross_residual(a, p);
        CHECK(r.residual(0, 0) == 0);
        CHECK(r.residual(0, 1) == 0);
        CHECK(r.residual(1, 0) == 0);
        CHECK(r.residual(1, 1) == -2);
        CHECK(r.norm == 2);
        CHECK(cross_residual_norm(a, p) == 2);
    }
    SUBCASE("exact rank one")
    {
        Rng             rng = make_rng(23, {});
        Vector<Complex> u   = sample_sphere_vector<Complex>(6, rng);
        Vector<Complex> v   = sample_sphere_vector<Complex>(5, rng);
        Matrix<Complex> a   = 3.0 * u * v.adjoint();
        for (Index i = 0; i < 6; ++i)
            for (Index j = 0; j < 5; ++j) {
                Pivot<Complex> p{i, j, a(i, j), std::abs(a(i, j))};
                CHECK(cross_residual(a, p).norm <= 1e-12 * cnorm(a));
            }
    }
    SUBCASE("pivot row and column vanish exactly")
    {
        Rng                              rng = make_rng(24, {});
        std::normal_distribution<double> g;
        Matrix<double>                   a(5, 7);
        for (Index j = 0; j < 7; ++j)
            for (Index i = 0; i < 5; ++i)
                a(i, j) = g(rng);
        Pivot<double> p{3, 4, a(3, 4), std::abs(a(3, 4))};
        const auto    r = cross_residual(a, p);
        CHECK(r.residual.row(3).cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.residual.col(4).cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.norm == cnorm(r.residual));
        CHECK(cross_residual_norm(a, p) == doctest::Approx(r.norm).epsilon(1e-14));
    }
}

TEST_CASE("stopping structure on random small matrices")
{
    // Integer entries in a narrow range produce many ties.
    Rng                                rng = make_rng(25, {});
    std::uniform_int_distribution<int> dims(1, 7), entries(-4, 4);
    std::normal_distribution<double>   g;
    int                                checked = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const Index    m = dims(rng), n = dims(rng);
        Matrix<double> a(m, n);
        const bool     integer = rep % 2 == 0;
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < m; ++i)
                a(i, j) = integer ? entries(rng) : g(rng);
        const Index start = sample_index(n, rng);
        const auto  t     = maxvol_rank1(a, start);

        REQUIRE_FALSE(t.visited.empty());
        CHECK(t.visited.front().col == start);
        CHECK(t.visited.front().row == first_argmax_in_column(a, start));
        for (std::size_t p = 1; p < t.visited.size(); ++p)
            CHECK(t.visited[p].abs_value > t.visited[p - 1].abs_value);
        CHECK(t.steps <= m + n);
        CHECK(t.result.row == t.visited.back().row);
        CHECK(t.result.col == t.visited.back().col);
        if (t.degenerate) {
            CHECK(cnorm(Matrix<double>(a.col(start))) == 0.0);
        } else {
            CHECK(t.converged == maximal_by_scan(a, t.result.row, t.result.col));
            CHECK(t.converged);
        }
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("converged pivot at the global maximum matches the exhaustive argmax")
{
    Rng                              rng = make_rng(26, {});
    std::normal_distribution<double> g;
    int                              hits = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Matrix<double> a(50, 50);
        for (Index j = 0; j < 50; ++j)
            for (Index i = 0; i < 50; ++i)
                a(i, j) = g(rng);
        const auto t   = maxvol_rank1(a, sample_index(50, rng));
        const auto top = oracle::global_argmax(a);
        CHECK(top.abs_value == cnorm(a));
        if (t.converged && t.result.abs_value == cnorm(a)) {
            ++hits;
            CHECK(t.result.row == top.row);
            CHECK(t.result.col == top.col);
        }
    }
    CHECK(hits > 0);
}

TEST_CASE("quality labels")
{
    SUBCASE("pivot at the largest coordinates")
    {
        Vector<double> u(3), v(3);
        u << 0.8, 0.6, 0.0;
        v << 0.0, 0.6, 0.8;
        auto          m = RankOneModel<double>::assemble(1.0, u, v, Matrix<double>::Constant(3, 3, 0.01));
        PivotTrace<double> t;
        t.start_col  = 2;
        t.result.row = 0;
        t.result.col = 2;
        const auto q = label_quality(m, t);
        CHECK(q.mu_u == 1.0);
        CHECK(q.mu_v == 1.0);
        CHECK(q.start_col_good);
        CHECK(q.final_col_good);
        CHECK(q.final_row_good);
    }
    SUBCASE("eps = 0 makes every nonzero column good")
    {
        Vector<double> u(2), v(3);
        u << 1.0, 0.0;
        v << 0.1, 0.0, std::sqrt(0.99);
        auto m = RankOneModel<double>::assemble(1.0, u, v, Matrix<double>::Zero(2, 3));
        REQUIRE(m.epsilon() == 0.0);
        PivotTrace<double> t;
        t.start_col = 0;
        t.result    = {0, 1, 0.0, 0.0};
        const auto q = label_quality(m, t);
        CHECK(q.start_col_good);
        CHECK_FALSE(q.final_col_good);
    }
    SUBCASE("eps = 3/32 puts the threshold at 1/4")
    {
        Vector<double> u(2), v(3);
        u << 1.0, 0.0;
        v << 1.0, 0.26, 0.24;
        v.normalize();
        const double delta = 3.0 / 32.0 * v.cwiseAbs().maxCoeff();
        auto m = RankOneModel<double>::assemble(1.0, u, v, Matrix<double>::Constant(2, 3, delta));
        REQUIRE(m.epsilon() == doctest::Approx(3.0 / 32.0));
        PivotTrace<double> t;
        t.start_col = 1;
        t.result    = {0, 2, 0.0, 0.0};
        const auto q = label_quality(m, t);
        CHECK(q.start_col_good);
        CHECK_FALSE(q.final_col_good);
        CHECK(q.mu_v == doctest::Approx(0.24));
    }
    SUBCASE("eps above 1/8 is rejected")
    {
        Vector<double> u(2), v(2);
        u << 1.0, 0.0;
        v << 1.0, 0.0;
        auto m = RankOneModel<double>::assemble(1.0, u, v, Matrix<double>::Constant(2, 2, 0.2));
        PivotTrace<double> t;
        CHECK_THROWS_AS(label_quality(m, t), ThresholdsUndefined);
    }
}
