#include "rankone/matrix.hpp"

#include <string>

namespace rankone {

std::string_view to_string(Field f)
{
    return f == Field::real ? "real" : "complex";
}

Field parse_field(std::string_view s)
{
    if (s == "real")
        return Field::real;
    if (s == "complex")
        return Field::complex;
    throw std::invalid_argument("unknown field '" + std::string(s) + "' (expected real|complex)");
}

namespace {

template <typename T>
void check_shape(const Matrix<T>& m)
{
    if (m.rows() < 1 || m.cols() < 1)
        throw InvalidDimension("matrix must have at least one row and one column");
}

} // namespace

DenseMatrix::DenseMatrix(Matrix<double> m)
    : storage_(std::move(m))
{
    check_shape(std::get<0>(storage_));
}

DenseMatrix::DenseMatrix(Matrix<Complex> m)
    : storage_(std::move(m))
{
    check_shape(std::get<1>(storage_));
}

DenseMatrix DenseMatrix::zeros(Index rows, Index cols, Field field)
{
    if (rows < 1 || cols < 1)
        throw InvalidDimension("matrix must have at least one row and one column");
    if (field == Field::real)
        return DenseMatrix(Matrix<double>(Matrix<double>::Zero(rows, cols)));
    return DenseMatrix(Matrix<Complex>(Matrix<Complex>::Zero(rows, cols)));
}

Index DenseMatrix::rows() const
{
    return visit([](const auto& m) { return m.rows(); });
}

Index DenseMatrix::cols() const
{
    return visit([](const auto& m) { return m.cols(); });
}

double DenseMatrix::abs(Index i, Index j) const
{
    return visit([&](const auto& m) { return static_cast<double>(std::abs(m(i, j))); });
}

double cnorm(const DenseMatrix& m)
{
    return m.visit([](const auto& x) { return cnorm(x); });
}

void require_same_field(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.field() != b.field())
        throw FieldMismatch("mixed-field operation: " + std::string(to_string(a.field())) + " vs " +
                            std::string(to_string(b.field())));
}

} // namespace rankone
