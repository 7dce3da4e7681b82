#include "rankone/maxvol.hpp"

#include <string>

#include <fmt/format.h>

#include "rankone/bounds.hpp"

namespace rankone {

namespace {

template <typename T>
void check_matrix(const Matrix<T>& a, Index start_col)
{
    if (a.rows() < 1 || a.cols() < 1)
        throw InvalidDimension("maxvol needs a nonempty matrix");
    if (start_col < 0 || start_col >= a.cols())
        throw std::out_of_range("start column " + std::to_string(start_col) + " outside [0, " +
                                std::to_string(a.cols()) + ")");
}

template <typename T>
Pivot<T> make_pivot(const Matrix<T>& a, Index i, Index j)
{
    return {i, j, a(i, j), static_cast<double>(std::abs(a(i, j)))};
}

// smallest index wins on ties
template <typename T>
Index argmax_in_column(const Matrix<T>& a, Index j)
{
    Index  best = 0;
    double top  = std::abs(a(0, j));
    for (Index i = 1; i < a.rows(); ++i) {
        double x = std::abs(a(i, j));
        if (x > top) {
            top  = x;
            best = i;
        }
    }
    return best;
}

template <typename T>
Index argmax_in_row(const Matrix<T>& a, Index i)
{
    Index  best = 0;
    double top  = std::abs(a(i, 0));
    for (Index j = 1; j < a.cols(); ++j) {
        double x = std::abs(a(i, j));
        if (x > top) {
            top  = x;
            best = j;
        }
    }
    return best;
}

enum class Line : std::uint8_t { none, column, row };

//
// Alternating argmax walk. The current pivot is known to be the maximum of
// its column and/or row; a walk segment ends once it is known for both.
//
template <typename T>
class Walker {
public:
    Walker(const Matrix<T>& a, bool track_viewed)
        : a_(a)
        , track_(track_viewed)
    {
        if (track_) {
            seen_.assign(static_cast<std::size_t>(a.size()), Line::none);
            used_.assign(static_cast<std::size_t>(a.size()), false);
        }
    }

    void start_from_column(Index j)
    {
        Index i = argmax_in_column(a_, j);
        note_scan_column(j);
        trace_.start_col = j;
        move_to(i, j);
        col_known_ = true;
        row_known_ = false;
    }

    bool segment_done() const { return col_known_ && row_known_; }

    // One argmax scan along whichever line is not yet known to be maximal.
    void scan()
    {
        const auto& cur = trace_.visited.back();
        // After a restart neither line is known; scan across the line the
        // element was found in first.
        bool scan_row = !row_known_ && (col_known_ || prefer_row_);
        if (scan_row) {
            Index j = argmax_in_row(a_, cur.row);
            note_scan_row(cur.row);
            if (std::abs(a_(cur.row, j)) > cur.abs_value) {
                move_to(cur.row, j);
                col_known_ = false;
            }
            row_known_ = true;
        } else {
            Index i = argmax_in_column(a_, cur.col);
            note_scan_column(cur.col);
            if (std::abs(a_(i, cur.col)) > cur.abs_value) {
                move_to(i, cur.col);
                row_known_ = false;
            }
            col_known_ = true;
        }
    }

    // Jump to the largest viewed element that has not been a pivot.
    // Returns false when no such element exists.
    bool restart()
    {
        const Index m    = a_.rows();
        const Index n    = a_.cols();
        Index       bi   = -1;
        Index       bj   = -1;
        double      best = -1.0;
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j) {
                auto k = flat(i, j);
                if (seen_[k] == Line::none || used_[k])
                    continue;
                double x = std::abs(a_(i, j));
                if (x > best) {
                    best = x;
                    bi   = i;
                    bj   = j;
                }
            }
        if (bi < 0)
            return false;
        prefer_row_ = seen_[flat(bi, bj)] == Line::column;
        trace_.restarts.push_back(trace_.visited.size());
        push(bi, bj);
        row_known_ = false;
        col_known_ = false;
        return true;
    }

    PivotTrace<T>& trace() { return trace_; }

private:
    std::size_t flat(Index i, Index j) const { return static_cast<std::size_t>(i * a_.cols() + j); }

    void push(Index i, Index j)
    {
        trace_.visited.push_back(make_pivot(a_, i, j));
        if (track_)
            used_[flat(i, j)] = true;
    }

    void move_to(Index i, Index j)
    {
        push(i, j);
        ++trace_.steps;
    }

    void note_scan_column(Index j)
    {
        ++trace_.scans;
        trace_.elements_examined += a_.rows();
        if (track_)
            for (Index i = 0; i < a_.rows(); ++i)
                if (seen_[flat(i, j)] == Line::none)
                    seen_[flat(i, j)] = Line::column;
    }

    void note_scan_row(Index i)
    {
        ++trace_.scans;
        trace_.elements_examined += a_.cols();
        if (track_)
            for (Index j = 0; j < a_.cols(); ++j)
                if (seen_[flat(i, j)] == Line::none)
                    seen_[flat(i, j)] = Line::row;
    }

    const Matrix<T>&   a_;
    bool               track_;
    PivotTrace<T>      trace_;
    bool               col_known_  = false;
    bool               row_known_  = false;
    bool               prefer_row_ = true;
    std::vector<Line>  seen_;
    std::vector<bool>  used_;
};

template <typename T>
void finish(const Matrix<T>& a, PivotTrace<T>& t, const Pivot<T>& result)
{
    t.result     = result;
    t.degenerate = result.abs_value == 0.0;
    t.converged  = !t.degenerate && is_row_column_maximal(a, result.row, result.col);
}

} // namespace

template <typename T>
bool is_row_column_maximal(const Matrix<T>& a, Index i, Index j)
{
    const double x = std::abs(a(i, j));
    for (Index r = 0; r < a.rows(); ++r)
        if (std::abs(a(r, j)) > x)
            return false;
    for (Index c = 0; c < a.cols(); ++c)
        if (std::abs(a(i, c)) > x)
            return false;
    return true;
}

template <typename T>
PivotTrace<T> maxvol_rank1(const Matrix<T>& a, Index start_col, std::optional<int> max_steps)
{
    check_matrix(a, start_col);
    const int cap = max_steps.value_or(static_cast<int>(a.rows() + a.cols()));
    if (cap < 1)
        throw std::invalid_argument("max_steps must be positive");

    Walker<T> w(a, false);
    w.start_from_column(start_col);
    while (!w.segment_done() && w.trace().steps < cap)
        w.scan();

    auto& t = w.trace();
    if (w.segment_done()) {
        // Both lines were scanned with no improvement: maximal by construction.
        t.result     = t.visited.back();
        t.degenerate = t.result.abs_value == 0.0;
        t.converged  = !t.degenerate;
    } else {
        finish(a, t, t.visited.back());
    }
    return std::move(t);
}

template <typename T>
PivotTrace<T> maxvol_fixed_steps(const Matrix<T>& a, Index start_col, int steps)
{
    if (steps < 1)
        throw std::invalid_argument("steps must be positive");
    return maxvol_rank1(a, start_col, steps);
}

template <typename T>
PivotTrace<T> maxvol_max_among_viewed(const Matrix<T>& a, Index start_col, int k)
{
    check_matrix(a, start_col);
    if (k < 1)
        throw std::invalid_argument("k must be positive");

    Walker<T> w(a, true);
    w.start_from_column(start_col);
    for (;;) {
        while (!w.segment_done())
            w.scan();
        if (w.trace().steps >= k || !w.restart())
            break;
    }

    // Each scanned line's maximum either became a pivot or lost to the pivot
    // it was compared with, so the largest viewed element is a pivot.
    auto&           t    = w.trace();
    const Pivot<T>* best = &t.visited.front();
    for (const auto& p : t.visited)
        if (p.abs_value > best->abs_value)
            best = &p;
    finish(a, t, *best);
    return std::move(t);
}

template <typename T>
Index scan_start_column(const Matrix<T>& a, Index k)
{
    if (k < 1 || k > a.cols())
        throw std::invalid_argument("k must lie in [1, n]");
    std::vector<Index> cols(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j)
        cols[static_cast<std::size_t>(j)] = j;
    return scan_start_column(a, std::span<const Index>(cols));
}

template <typename T>
Index scan_start_column(const Matrix<T>& a, std::span<const Index> columns)
{
    if (columns.empty())
        throw std::invalid_argument("column set must be nonempty");
    Index  best_col = -1;
    double top      = -1.0;
    for (Index j : columns) {
        if (j < 0 || j >= a.cols())
            throw std::out_of_range("column index outside the matrix");
        for (Index i = 0; i < a.rows(); ++i) {
            double x = std::abs(a(i, j));
            if (x > top || (x == top && j < best_col)) {
                top      = x;
                best_col = j;
            }
        }
    }
    return best_col;
}

template <typename T>
CrossResidual<T> cross_residual(const Matrix<T>& a, const Pivot<T>& pivot)
{
    if (pivot.value == T(0))
        throw DegeneratePivot("cross residual needs a nonzero pivot");
    const Index pi = pivot.row;
    const Index pj = pivot.col;

    CrossResidual<T> out;
    out.residual = a - a.col(pj) * (a.row(pi) / pivot.value);
    // The cross interpolates its own row and column exactly.
    out.residual.row(pi).setZero();
    out.residual.col(pj).setZero();
    out.norm = cnorm(out.residual);
    return out;
}

template <typename T>
double cross_residual_norm(const Matrix<T>& a, const Pivot<T>& pivot)
{
    if (pivot.value == T(0))
        throw DegeneratePivot("cross residual needs a nonzero pivot");
    double best = 0.0;
    for (Index j = 0; j < a.cols(); ++j) {
        if (j == pivot.col)
            continue;
        const T scale = a(pivot.row, j) / pivot.value;
        for (Index i = 0; i < a.rows(); ++i) {
            if (i == pivot.row)
                continue;
            best = std::max(best, static_cast<double>(std::abs(a(i, j) - a(i, pivot.col) * scale)));
        }
    }
    return best;
}

template <typename T>
QualityLabels label_quality(const RankOneModel<T>& model, const PivotTrace<T>& trace)
{
    if (model.epsilon() > 0.125 + bounds::kEpsSlack)
        throw ThresholdsUndefined("good/bad thresholds need epsilon <= 1/8, got " + fmt::format("{}", model.epsilon()));
    const auto   mu    = mu_thresholds(model.epsilon());
    const double u_inf = model.u_inf();
    const double v_inf = model.v_inf();
    const auto&  u     = model.u();
    const auto&  v     = model.v();

    QualityLabels q;
    q.mu_u           = std::abs(u(trace.result.row)) / u_inf;
    q.mu_v           = std::abs(v(trace.result.col)) / v_inf;
    q.start_col_good = std::abs(v(trace.start_col)) > mu.mu1 * v_inf;
    q.final_col_good = std::abs(v(trace.result.col)) > mu.mu1 * v_inf;
    q.final_row_good = std::abs(u(trace.result.row)) > mu.mu1 * u_inf;
    return q;
}

#define RANKONE_INSTANTIATE(T)                                                                  \
    template bool             is_row_column_maximal<T>(const Matrix<T>&, Index, Index);        \
    template PivotTrace<T>    maxvol_rank1<T>(const Matrix<T>&, Index, std::optional<int>);    \
    template PivotTrace<T>    maxvol_fixed_steps<T>(const Matrix<T>&, Index, int);             \
    template PivotTrace<T>    maxvol_max_among_viewed<T>(const Matrix<T>&, Index, int);        \
    template Index            scan_start_column<T>(const Matrix<T>&, Index);                   \
    template Index            scan_start_column<T>(const Matrix<T>&, std::span<const Index>);  \
    template CrossResidual<T> cross_residual<T>(const Matrix<T>&, const Pivot<T>&);            \
    template double           cross_residual_norm<T>(const Matrix<T>&, const Pivot<T>&);       \
    template QualityLabels    label_quality<T>(const RankOneModel<T>&, const PivotTrace<T>&);

RANKONE_INSTANTIATE(double)
RANKONE_INSTANTIATE(Complex)

#undef RANKONE_INSTANTIATE

} // namespace rankone
