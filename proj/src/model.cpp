#include "rankone/model.hpp"

#include <cmath>
#include <string>

namespace rankone {

namespace {

void require_unit(double norm, const char* name)
{
    if (!(std::abs(norm - 1.0) <= 1e-12))
        throw InvalidParameter(std::string(name) + " must have unit Euclidean norm");
}

} // namespace

template <typename T>
RankOneModel<T> RankOneModel<T>::assemble(double sigma, Vector<T> u, Vector<T> v, Matrix<T> noise)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw InvalidParameter("sigma must be a finite nonnegative number");
    if (u.size() < 1 || v.size() < 1)
        throw InvalidDimension("singular vectors must be nonempty");
    if (noise.rows() != u.size() || noise.cols() != v.size())
        throw InvalidDimension("noise shape does not match the singular vectors");
    require_unit(u.norm(), "u");
    require_unit(v.norm(), "v");

    RankOneModel m;
    m.sigma_ = sigma;
    m.u_     = std::move(u);
    m.v_     = std::move(v);
    m.noise_ = std::move(noise);
    m.a_     = sigma * m.u_ * m.v_.adjoint() + m.noise_;
    m.delta_ = cnorm(m.noise_);
    m.u_inf_ = inf_norm(m.u_);
    m.v_inf_ = inf_norm(m.v_);

    const double signal = sigma * m.u_inf_ * m.v_inf_;
    if (signal > 0.0)
        m.epsilon_ = m.delta_ / signal;
    else
        m.epsilon_ = m.delta_ > 0.0 ? INFINITY : 0.0;
    return m;
}

template <typename T>
RankOneModel<T> build_ratio_model(const SingularSpectrumSpec& spec, Rng& rng)
{
    if (!(spec.ratio > 0.0) || !std::isfinite(spec.ratio))
        throw InvalidParameter("ratio must be positive and finite");
    if (spec.field != field_of_v<T>)
        throw FieldMismatch("spec field does not match the requested scalar type");
    if (std::min(spec.rows, spec.cols) < 2)
        throw InvalidDimension("need min(m, n) >= 2 to form a noise part");

    // A = U diag(sigma, 1, ..., 1) W, with u = U(:,0) and v^* = W(0,:).
    Matrix<T> left  = sample_haar_orthonormal<T>(spec.rows, rng);
    Matrix<T> right = sample_haar_orthonormal<T>(spec.cols, rng);

    const Index rank = std::min(spec.rows, spec.cols);
    Matrix<T>   noise = left.middleCols(1, rank - 1) * right.middleRows(1, rank - 1);

    Vector<T> u = left.col(0);
    Vector<T> v = right.row(0).adjoint();

    // Haar columns are unit up to rounding; renormalize so the stored
    // factors meet the unit-norm invariant exactly.
    u /= u.norm();
    v /= v.norm();

    const double delta = cnorm(noise);
    const double sigma = spec.ratio * delta / (inf_norm(u) * inf_norm(v));
    return RankOneModel<T>::assemble(sigma, std::move(u), std::move(v), std::move(noise));
}

RankOneModel<double> build_independent_noise_model(Index rows, Index cols, double sigma, double delta, Rng& rng)
{
    if (rows < 2 || cols < 2)
        throw InvalidDimension("independent-noise model needs m, n >= 2");
    if (!(delta > 0.0))
        throw InvalidParameter("delta must be positive");
    if (!(sigma > 0.0))
        throw InvalidParameter("sigma must be positive");

    Vector<double> u = sample_sphere_vector<double>(rows, rng);
    Vector<double> v = sample_sphere_vector<double>(cols, rng);

    std::uniform_real_distribution<double> magnitude(0.0, delta);
    std::bernoulli_distribution            negative(0.5);
    Matrix<double>                         noise(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            double e    = magnitude(rng);
            noise(i, j) = negative(rng) ? -e : e;
        }
    return RankOneModel<double>::assemble(sigma, std::move(u), std::move(v), std::move(noise));
}

template class RankOneModel<double>;
template class RankOneModel<Complex>;
template RankOneModel<double>  build_ratio_model<double>(const SingularSpectrumSpec&, Rng&);
template RankOneModel<Complex> build_ratio_model<Complex>(const SingularSpectrumSpec&, Rng&);

} // namespace rankone
