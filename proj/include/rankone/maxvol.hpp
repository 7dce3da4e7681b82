#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rankone/matrix.hpp"
#include "rankone/model.hpp"

namespace rankone {

struct DegeneratePivot : std::domain_error {
    using std::domain_error::domain_error;
};

struct ThresholdsUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

template <typename T>
struct Pivot {
    Index  row       = 0;
    Index  col       = 0;
    T      value     = T(0);
    double abs_value = 0.0;
};

enum class StartPolicy { given, random_column, verified_good, scan_k };

//
// Sequence of elements visited by the alternating row/column argmax search.
//
// steps counts scans that moved the pivot, the initial column scan included.
// scans additionally counts the confirming scans that found no larger element.
// Within one segment (between restarts) abs_value is strictly increasing.
//
template <typename T>
struct PivotTrace {
    std::vector<Pivot<T>>    visited;
    std::vector<std::size_t> restarts; // positions in visited reached by a restart jump
    Pivot<T>                 result;   // element returned by the variant
    Index                    start_col    = 0;
    int                      steps        = 0;
    int                      scans        = 0;
    bool                     converged    = false; // result is maximal in its row and its column
    bool                     degenerate   = false; // result is an exact zero
    StartPolicy              start_policy = StartPolicy::given;
    std::int64_t             elements_examined = 0;
};

/// Rank-1 maxvol from the argmax of column start_col. Stops on a pivot that
/// is maximal in both its row and column, or after max_steps moves
/// (default m + n). Ties go to the smallest index.
template <typename T>
PivotTrace<T> maxvol_rank1(const Matrix<T>& a, Index start_col, std::optional<int> max_steps = std::nullopt);

/// Runs at most `steps` moves and returns the last pivot whether or not it
/// is maximal in its row and column.
template <typename T>
PivotTrace<T> maxvol_fixed_steps(const Matrix<T>& a, Index start_col, int steps);

/// Keeps searching until at least k moves were made: each time the walk
/// converges early it restarts from the largest viewed element that has not
/// been a pivot yet. Returns the largest element viewed.
template <typename T>
PivotTrace<T> maxvol_max_among_viewed(const Matrix<T>& a, Index start_col, int k);

/// Column holding the largest-modulus element among columns [0, k).
template <typename T>
Index scan_start_column(const Matrix<T>& a, Index k);

/// Column holding the largest-modulus element among the listed columns.
template <typename T>
Index scan_start_column(const Matrix<T>& a, std::span<const Index> columns);

template <typename T>
struct CrossResidual {
    Matrix<T> residual;
    double    norm = 0.0;
};

/// R = A - A(:, j) A(i, :) / A(i, j) for the pivot (i, j).
template <typename T>
CrossResidual<T> cross_residual(const Matrix<T>& a, const Pivot<T>& pivot);

/// ||A - A(:, j) A(i, :) / A(i, j)||_C without storing R.
template <typename T>
double cross_residual_norm(const Matrix<T>& a, const Pivot<T>& pivot);

/// True when |A(i, j)| is not exceeded anywhere in row i or column j.
template <typename T>
bool is_row_column_maximal(const Matrix<T>& a, Index i, Index j);

struct QualityLabels {
    double mu_u           = 0.0; // |u_i| / ||u||_inf at the result row
    double mu_v           = 0.0; // |v_j| / ||v||_inf at the result column
    bool   start_col_good = false;
    bool   final_col_good = false;
    bool   final_row_good = false;
};

/// Good column: |v_j| > mu1 ||v||_inf; good row: |u_i| > mu1 ||u||_inf.
/// Needs epsilon <= 1/8.
template <typename T>
QualityLabels label_quality(const RankOneModel<T>& model, const PivotTrace<T>& trace);

} // namespace rankone
