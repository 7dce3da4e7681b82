#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "rankone/matrix.hpp"

namespace rankone {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent substream identified by (master, path...).
/// Streams depend only on the path, never on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return Rng(derive_seed(master, path));
}

/// Uniform point on the unit sphere in R^n or C^n.
template <typename T>
Vector<T> sample_sphere_vector(Index n, Rng& rng);

/// Haar-distributed orthogonal (real) or unitary (complex) n x n matrix.
template <typename T>
Matrix<T> sample_haar_orthonormal(Index n, Rng& rng);

/// Uniform index in [0, n).
Index sample_index(Index n, Rng& rng);

extern template Vector<double>  sample_sphere_vector<double>(Index, Rng&);
extern template Vector<Complex> sample_sphere_vector<Complex>(Index, Rng&);
extern template Matrix<double>  sample_haar_orthonormal<double>(Index, Rng&);
extern template Matrix<Complex> sample_haar_orthonormal<Complex>(Index, Rng&);

} // namespace rankone
