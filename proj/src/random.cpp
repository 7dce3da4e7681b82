#include "rankone/random.hpp"

namespace rankone {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = mix64(master);
    for (auto p : path)
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

Index sample_index(Index n, Rng& rng)
{
    if (n < 1)
        throw InvalidDimension("cannot sample an index from an empty range");
    std::uniform_int_distribution<Index> pick(0, n - 1);
    return pick(rng);
}

namespace {

template <typename T>
T gaussian(std::normal_distribution<double>& g, Rng& rng)
{
    if constexpr (is_complex_v<T>) {
        double re = g(rng);
        double im = g(rng);
        return {re, im};
    } else {
        return g(rng);
    }
}

} // namespace

template <typename T>
Vector<T> sample_sphere_vector(Index n, Rng& rng)
{
    if (n < 1)
        throw InvalidDimension("sphere dimension must be positive");

    std::normal_distribution<double> g;
    Vector<T> v(n);
    double norm = 0.0;
    do {
        for (Index i = 0; i < n; ++i)
            v(i) = gaussian<T>(g, rng);
        norm = v.norm();
    } while (norm == 0.0);
    v /= norm;
    return v;
}

template <typename T>
Matrix<T> sample_haar_orthonormal(Index n, Rng& rng)
{
    if (n < 1)
        throw InvalidDimension("Haar matrix dimension must be positive");

    std::normal_distribution<double> g;
    Matrix<T> z(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            z(i, j) = gaussian<T>(g, rng);

    Eigen::HouseholderQR<Matrix<T>> qr(z);
    Matrix<T> q = qr.householderQ();
    const auto& r = qr.matrixQR();

    // Fix the phase of diag(R) so the factorization is unique; without this
    // Q is not Haar distributed.
    for (Index j = 0; j < n; ++j) {
        T d = r(j, j);
        double mag = std::abs(d);
        if (mag > 0.0)
            q.col(j) *= d / mag;
    }
    return q;
}

template Vector<double>  sample_sphere_vector<double>(Index, Rng&);
template Vector<Complex> sample_sphere_vector<Complex>(Index, Rng&);
template Matrix<double>  sample_haar_orthonormal<double>(Index, Rng&);
template Matrix<Complex> sample_haar_orthonormal<Complex>(Index, Rng&);

} // namespace rankone
