#pragma once

#include <stdexcept>

#include "rankone/matrix.hpp"
#include "rankone/random.hpp"

namespace rankone {

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

//
// A = sigma * u * v^* + E with the generating parts kept next to the dense
// matrix. delta and epsilon are derived, never supplied.
//
template <typename T>
class RankOneModel {
public:
    /// Validates unit norms and materializes A.
    static RankOneModel assemble(double sigma, Vector<T> u, Vector<T> v, Matrix<T> noise);

    double           sigma() const { return sigma_; }
    const Vector<T>& u() const { return u_; }
    const Vector<T>& v() const { return v_; }
    const Matrix<T>& noise() const { return noise_; }
    const Matrix<T>& a() const { return a_; }

    /// ||E||_C
    double delta() const { return delta_; }
    /// delta / (sigma ||u||_inf ||v||_inf)
    double epsilon() const { return epsilon_; }
    double u_inf() const { return u_inf_; }
    double v_inf() const { return v_inf_; }

    Index rows() const { return a_.rows(); }
    Index cols() const { return a_.cols(); }

private:
    RankOneModel() = default;

    double    sigma_ = 0.0;
    Vector<T> u_;
    Vector<T> v_;
    Matrix<T> noise_;
    Matrix<T> a_;
    double    delta_   = 0.0;
    double    epsilon_ = 0.0;
    double    u_inf_   = 0.0;
    double    v_inf_   = 0.0;
};

/// Target ratio x = sigma ||u||_inf ||v||_inf / delta for a generated model.
struct SingularSpectrumSpec {
    double ratio = 1.0;
    Index  rows  = 100;
    Index  cols  = 100;
    Field  field = Field::real;
};

/// Haar singular vectors, trailing singular values 1, leading singular value
/// solved so that the realized ratio equals spec.ratio.
template <typename T>
RankOneModel<T> build_ratio_model(const SingularSpectrumSpec& spec, Rng& rng);

/// Sphere-uniform u, v and noise entries with modulus U[0, delta] and a fair sign.
RankOneModel<double> build_independent_noise_model(Index rows, Index cols, double sigma, double delta, Rng& rng);

extern template class RankOneModel<double>;
extern template class RankOneModel<Complex>;
extern template RankOneModel<double>  build_ratio_model<double>(const SingularSpectrumSpec&, Rng&);
extern template RankOneModel<Complex> build_ratio_model<Complex>(const SingularSpectrumSpec&, Rng&);

} // namespace rankone
