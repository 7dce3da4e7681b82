#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <string>
#include <stdexcept>
#include <string_view>
#include <type_traits>
#include <variant>

#include <Eigen/Dense>

namespace rankone {

using Index   = Eigen::Index;
using Complex = std::complex<double>;

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class Field { real, complex };

std::string_view to_string(Field f);
Field            parse_field(std::string_view s);

template <typename T>
inline constexpr bool is_complex_v = std::is_same_v<T, Complex>;

template <typename T>
inline constexpr Field field_of_v = is_complex_v<T> ? Field::complex : Field::real;

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FieldMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Chebyshev norm: the largest entry modulus.
template <typename Derived>
double cnorm(const Eigen::MatrixBase<Derived>& m)
{
    double best = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            best = std::max(best, static_cast<double>(std::abs(m(i, j))));
    return best;
}

/// max_i |v_i|
template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& v)
{
    return cnorm(v);
}

//
// A dense m x n matrix whose scalar field is fixed when it is built.
// Algorithms are templates over the scalar; this wrapper is what crosses
// file and command-line boundaries.
//
class DenseMatrix {
public:
    using Storage = std::variant<Matrix<double>, Matrix<Complex>>;

    explicit DenseMatrix(Matrix<double> m);
    explicit DenseMatrix(Matrix<Complex> m);

    static DenseMatrix zeros(Index rows, Index cols, Field field);

    Index rows() const;
    Index cols() const;
    Field field() const { return storage_.index() == 0 ? Field::real : Field::complex; }

    template <typename T>
    const Matrix<T>& as() const
    {
        if (field() != field_of_v<T>)
            throw FieldMismatch("matrix holds " + std::string(to_string(field())) + " entries");
        return std::get<Matrix<T>>(storage_);
    }

    template <typename F>
    decltype(auto) visit(F&& f) const
    {
        return std::visit(std::forward<F>(f), storage_);
    }

    /// Entry modulus; valid for either field.
    double abs(Index i, Index j) const;

private:
    Storage storage_;
};

double cnorm(const DenseMatrix& m);

/// Rejects operands whose scalar fields differ.
void require_same_field(const DenseMatrix& a, const DenseMatrix& b);

} // namespace rankone
