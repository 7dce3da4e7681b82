#include <doctest.h>

#include "rankone/matrix.hpp"
#include "rankone/random.hpp"

using namespace rankone;

TEST_CASE("cnorm of small matrices")
{
    CHECK(cnorm(Matrix<double>::Zero(3, 2)) == 0.0);

    Matrix<double> m(2, 2);
    m << 1, -3, 2, 0;
    CHECK(cnorm(m) == 3.0);

    Matrix<Complex> z(1, 2);
    z << Complex(3, 4), Complex(-1, 0);
    CHECK(cnorm(z) == doctest::Approx(5.0));
}

TEST_CASE("cnorm agrees with a full scan")
{
    Rng                              rng = make_rng(3, {1});
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 50; ++rep) {
        Matrix<double> m(7, 5);
        for (Index j = 0; j < 5; ++j)
            for (Index i = 0; i < 7; ++i)
                m(i, j) = g(rng);
        double top = 0.0;
        for (Index i = 0; i < 7; ++i)
            for (Index j = 0; j < 5; ++j)
                top = std::max(top, std::abs(m(i, j)));
        CHECK(cnorm(m) == top);
        CHECK(cnorm(DenseMatrix(m)) == top);
    }
}

TEST_CASE("DenseMatrix field handling")
{
    DenseMatrix r = DenseMatrix::zeros(2, 3, Field::real);
    DenseMatrix c = DenseMatrix::zeros(2, 3, Field::complex);
    CHECK(r.field() == Field::real);
    CHECK(c.field() == Field::complex);
    CHECK(r.rows() == 2);
    CHECK(r.cols() == 3);
    CHECK_NOTHROW(r.as<double>());
    CHECK_THROWS_AS(r.as<Complex>(), FieldMismatch);
    CHECK_THROWS_AS(require_same_field(r, c), FieldMismatch);
    CHECK_THROWS_AS(DenseMatrix::zeros(0, 3, Field::real), InvalidDimension);
    CHECK_THROWS_AS(DenseMatrix(Matrix<double>(0, 0)), InvalidDimension);
}

TEST_CASE("field names")
{
    CHECK(parse_field("real") == Field::real);
    CHECK(parse_field("complex") == Field::complex);
    CHECK(to_string(Field::complex) == "complex");
    CHECK_THROWS(parse_field("quaternion"));
}
