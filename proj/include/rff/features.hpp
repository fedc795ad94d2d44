#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <utility>

#include "rff/errors.hpp"
#include "rff/kernels.hpp"
#include "rff/spectral.hpp"

namespace rff {

// N x 2m random Fourier basis, columns ordered [cosine block | sine block],
// with the 1/sqrt(m) (stationary) or 1/(2 sqrt(m)) (non-stationary) scaling
// already applied.
struct FeatureMatrix {
    Matrix phi;
    FrequencyMatrix omega_ref;
    double scaling = 0.0;
};

// Phi = [cos(X Omega^T) | sin(X Omega^T)] / sqrt(m), optionally multiplied by
// the kernel output scale. Leverage-resampled frequencies additionally apply
// their column weight to the cosine and sine column of each frequency.
inline FeatureMatrix feature_map(const Eigen::Ref<const Matrix>& X, const FrequencyMatrix& omega,
                                 double output_scale = 1.0) {
    if (X.cols() != omega.omega.cols())
        throw InputError("feature_map: design matrix and frequency matrix dimensions differ");
    if (!X.allFinite()) throw InputError("feature_map: non-finite design matrix");
    const Index m = omega.omega.rows();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    const Matrix projection = X * omega.omega.transpose();
    Matrix phi(X.rows(), 2 * m);
    phi.leftCols(m) = projection.array().cos();
    phi.rightCols(m) = projection.array().sin();
    phi *= scale * output_scale;
    if (omega.column_weights.size() > 0) {
        if (omega.column_weights.size() != m)
            throw InputError("feature_map: column weight count does not match frequency count");
        for (Index j = 0; j < m; ++j) {
            phi.col(j) *= omega.column_weights[j];
            phi.col(m + j) *= omega.column_weights[j];
        }
    }
    return FeatureMatrix{std::move(phi), omega, scale * output_scale};
}

// Non-stationary map over a frequency pair:
//   Phi = [cos(X O1^T) + cos(X O2^T) | sin(X O1^T) + sin(X O2^T)] / (2 sqrt(m)).
// With Omega1 == Omega2 this reduces exactly to feature_map.
inline FeatureMatrix feature_map_nonstationary(const Eigen::Ref<const Matrix>& X,
                                               const FrequencyMatrix& omega1,
                                               const FrequencyMatrix& omega2,
                                               double output_scale = 1.0) {
    if (omega1.omega.rows() != omega2.omega.rows() ||
        omega1.omega.cols() != omega2.omega.cols())
        throw InputError("feature_map_nonstationary: frequency matrices must share a shape");
    if (X.cols() != omega1.omega.cols())
        throw InputError("feature_map_nonstationary: design and frequency dimensions differ");
    const Index m = omega1.omega.rows();
    const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(m)));
    const Matrix p1 = X * omega1.omega.transpose();
    const Matrix p2 = X * omega2.omega.transpose();
    Matrix phi(X.rows(), 2 * m);
    phi.leftCols(m) = p1.array().cos() + p2.array().cos();
    phi.rightCols(m) = p1.array().sin() + p2.array().sin();
    phi *= scale * output_scale;
    return FeatureMatrix{std::move(phi), omega1, scale * output_scale};
}

// Monte Carlo kernel estimate K = Phi Phi^T.
inline Matrix approx_kernel(const FeatureMatrix& phi) {
    if (!phi.phi.allFinite()) throw InputError("approx_kernel: non-finite feature matrix");
    return phi.phi * phi.phi.transpose();
}

// f = Phi(grid) w for an explicit coefficient vector (test and plotting hook).
inline Vector render_function(const FrequencyMatrix& omega, const Eigen::Ref<const Matrix>& grid,
                              const Eigen::Ref<const Vector>& coeffs) {
    const FeatureMatrix phi = feature_map(grid, omega);
    if (coeffs.size() != phi.phi.cols())
        throw InputError("render_function: coefficient length must be 2m");
    return phi.phi * coeffs;
}

// Random function from the span of the Fourier basis: f = Phi(grid) w with
// w ~ N(0, I_2m). Each call consumes 2m draws from the generator.
inline Vector sample_function(const FrequencyMatrix& omega, const Eigen::Ref<const Matrix>& grid,
                              Rng& rng) {
    Vector coeffs(2 * omega.omega.rows());
    for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] = draw_normal(rng);
    return render_function(omega, grid, coeffs);
}

// Oversample-then-resample pipeline for leverage score features: draw
// oversample*m i.i.d. candidates, score their feature columns on X at
// lambda, and resample m frequencies proportional to leverage.
inline FrequencyMatrix sample_frequencies_leverage(const KernelSpec& spec,
                                                   const Eigen::Ref<const Matrix>& X, int m,
                                                   double lambda, std::uint64_t seed,
                                                   int oversample = 8) {
    if (oversample < 1) throw ConfigError("sample_frequencies_leverage: oversample must be >= 1");
    const int m0 = m * oversample;
    const FrequencyMatrix candidates =
        sample_frequencies_iid(spec, m0, static_cast<int>(X.cols()), seed);
    const FeatureMatrix phi = feature_map(X, candidates);
    const LeverageScores scores = ridge_leverage_scores(phi.phi, lambda);
    return resample_by_leverage(candidates, scores, m, seed + 1);
}

} // namespace rff
