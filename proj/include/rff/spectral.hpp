#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rff/errors.hpp"
#include "rff/kernels.hpp"

namespace rff {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Deterministic scalar draws. All samplers below consume the raw engine
// through these helpers only, so the produced streams do not depend on the
// standard library's distribution implementations.
// ---------------------------------------------------------------------------

// Uniform on the open interval (0, 1).
inline double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Quantile of the standard normal distribution (Wichura's PPND16).
// Absolute error below 1e-15 over (1e-300, 1 - 1e-16).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("normal_quantile: p must lie in (0, 1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                    3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                  4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                  2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                  5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

// Quantile of the standard Laplace distribution (location 0, scale 1).
inline double laplace_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("laplace_quantile: p must lie in (0, 1)");
    return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
}

// Quantile of the standard Cauchy distribution.
inline double cauchy_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("cauchy_quantile: p must lie in (0, 1)");
    return std::tan(std::numbers::pi_v<double> * (p - 0.5));
}

inline double draw_normal(Rng& rng) { return normal_quantile(uniform01(rng)); }

// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze.
inline double draw_gamma(Rng& rng, double shape) {
    if (!(shape > 0.0)) throw ConfigError("draw_gamma: shape must be > 0");
    if (shape < 1.0) {
        const double boost = std::pow(uniform01(rng), 1.0 / shape);
        return draw_gamma(rng, shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x, v;
        do {
            x = draw_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double draw_chi_square(Rng& rng, double dof) { return 2.0 * draw_gamma(rng, 0.5 * dof); }

// ---------------------------------------------------------------------------
// Frequency matrices
// ---------------------------------------------------------------------------

enum class Provenance { Iid, Qmc, Orf, Leverage, NonstationaryPair };

inline std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Iid: return "iid";
        case Provenance::Qmc: return "qmc";
        case Provenance::Orf: return "orf";
        case Provenance::Leverage: return "leverage";
        case Provenance::NonstationaryPair: return "nonstationary-pair";
    }
    throw ConfigError("unknown provenance");
}

// m x d matrix of sampled spectral frequencies, one frequency per row.
// column_weights is nonempty only for leverage-resampled matrices and holds
// one multiplicative weight per frequency (applied to its cos and sin column).
struct FrequencyMatrix {
    Matrix omega;
    Provenance provenance = Provenance::Iid;
    Vector column_weights;
    std::uint64_t seed = 0;
};

struct LeverageScores {
    Vector scores;  // one per Fourier basis column (2m entries)
    double lambda = 0.0;
};

namespace detail {

inline void check_sample_shape(int m, int d) {
    if (m < 1) throw InputError("frequency sample: m must be >= 1");
    if (d < 1) throw InputError("frequency sample: d must be >= 1");
}

inline void require_samplable(const KernelSpec& spec) {
    if (!is_shift_invariant(spec.family))
        throw ConfigError("spectral sampling requires a shift-invariant kernel family; '" +
                          family_name(spec.family) + "' has no spectral density");
}

} // namespace detail

// I.i.d. rows from the spectral density of a shift-invariant kernel:
//   SE      -> per-coordinate Gaussian with standard deviation 1/lengthscale
//   Cauchy  -> per-coordinate Laplace(0, 1)
//   Laplacian -> per-coordinate Cauchy(0, 1/lengthscale)
//   Matern  -> multivariate t: z * sqrt(2 nu / u) / lengthscale, u ~ chi2(2 nu)
// Entries are drawn row-major, so for a fixed seed the first m rows of a
// larger request coincide with a smaller one (nested feature sets).
inline FrequencyMatrix sample_frequencies_iid(const KernelSpec& spec, int m, int d,
                                              std::uint64_t seed) {
    validate_spec(spec);
    detail::require_samplable(spec);
    detail::check_sample_shape(m, d);
    Rng rng(seed);
    Matrix omega(m, d);
    switch (spec.family) {
        case KernelFamily::SquaredExponential: {
            const double inv_ell = 1.0 / spec.lengthscale;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < d; ++j) omega(i, j) = inv_ell * draw_normal(rng);
            break;
        }
        case KernelFamily::Cauchy: {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < d; ++j) omega(i, j) = laplace_quantile(uniform01(rng));
            break;
        }
        case KernelFamily::Laplacian: {
            const double inv_ell = 1.0 / spec.lengthscale;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < d; ++j)
                    omega(i, j) = inv_ell * cauchy_quantile(uniform01(rng));
            break;
        }
        case KernelFamily::Matern: {
            const double nu = spec.smoothness;
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < d; ++j) omega(i, j) = draw_normal(rng);
                const double u = draw_chi_square(rng, 2.0 * nu);
                omega.row(i) *= std::sqrt(2.0 * nu / u) / spec.lengthscale;
            }
            break;
        }
        case KernelFamily::Polynomial:
            throw ConfigError("unreachable");
    }
    return FrequencyMatrix{std::move(omega), Provenance::Iid, Vector(), seed};
}

// ---------------------------------------------------------------------------
// Quasi-Monte Carlo
// ---------------------------------------------------------------------------

inline constexpr int kHaltonPrimes[20] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                          31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

// Van der Corput radical inverse of index i in the given base.
inline double radical_inverse(std::uint64_t i, int base) {
    double result = 0.0;
    double digit_value = 1.0 / base;
    while (i > 0) {
        result += static_cast<double>(i % base) * digit_value;
        i /= base;
        digit_value /= base;
    }
    return result;
}

// First m Halton points in (0,1)^d, column j in the j-th prime base.
// Indexing starts at 1 so the origin never appears.
inline Matrix halton_points(int m, int d) {
    detail::check_sample_shape(m, d);
    if (d > 20) throw ConfigError("halton_points: at most 20 dimensions supported");
    Matrix points(m, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < m; ++i)
            points(i, j) = radical_inverse(static_cast<std::uint64_t>(i) + 1, kHaltonPrimes[j]);
    return points;
}

// Halton points pushed through the per-coordinate quantile of the spectral
// density. Deterministic; only families with a coordinate-wise quantile
// are supported.
inline FrequencyMatrix sample_frequencies_qmc(const KernelSpec& spec, int m, int d) {
    validate_spec(spec);
    detail::require_samplable(spec);
    if (spec.family == KernelFamily::Matern)
        throw ConfigError("QMC sampling is unsupported for the Matern family "
                          "(its spectral density has no coordinate-wise quantile)");
    Matrix omega = halton_points(m, d);
    switch (spec.family) {
        case KernelFamily::SquaredExponential: {
            const double inv_ell = 1.0 / spec.lengthscale;
            omega = omega.unaryExpr([&](double u) { return inv_ell * normal_quantile(u); });
            break;
        }
        case KernelFamily::Cauchy:
            omega = omega.unaryExpr([](double u) { return laplace_quantile(u); });
            break;
        case KernelFamily::Laplacian: {
            const double inv_ell = 1.0 / spec.lengthscale;
            omega = omega.unaryExpr([&](double u) { return inv_ell * cauchy_quantile(u); });
            break;
        }
        default:
            throw ConfigError("unreachable");
    }
    return FrequencyMatrix{std::move(omega), Provenance::Qmc, Vector(), 0};
}

// ---------------------------------------------------------------------------
// Orthogonal random features
// ---------------------------------------------------------------------------

// Stacked d x d blocks S * O / lengthscale, where O is the Q factor of a
// Gaussian matrix (sign-fixed so the factorization is unique) and S holds the
// row norms of an independent Gaussian matrix. Rows within a block are
// orthogonal, each row is marginally Gaussian, so the kernel estimate stays
// unbiased for the SE family.
inline FrequencyMatrix sample_frequencies_orf(const KernelSpec& spec, int m, int d,
                                              std::uint64_t seed) {
    validate_spec(spec);
    if (spec.family != KernelFamily::SquaredExponential)
        throw ConfigError("orthogonal random features are only defined for the SE family");
    detail::check_sample_shape(m, d);
    Rng rng(seed);
    const int n_blocks = (m + d - 1) / d;
    Matrix omega(n_blocks * d, d);
    const double inv_ell = 1.0 / spec.lengthscale;
    for (int b = 0; b < n_blocks; ++b) {
        Matrix G(d, d), G1(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G(i, j) = draw_normal(rng);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G1(i, j) = draw_normal(rng);
        Eigen::HouseholderQR<Matrix> qr(G);
        Matrix O = qr.householderQ();
        const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < d; ++j)
            if (R(j, j) < 0.0) O.col(j) = -O.col(j);
        const Vector s = G1.rowwise().norm();
        omega.middleRows(b * d, d) = inv_ell * s.asDiagonal() * O;
    }
    omega.conservativeResize(m, d);
    return FrequencyMatrix{std::move(omega), Provenance::Orf, Vector(), seed};
}

// ---------------------------------------------------------------------------
// Ridge leverage scores
// ---------------------------------------------------------------------------

// Column ridge leverage scores of a feature matrix:
//   score_j = [Phi^T (Phi Phi^T + lambda I_N)^{-1} Phi]_jj
// computed through the equivalent 2m x 2m form Phi^T Phi (Phi^T Phi + lambda I)^{-1}.
inline LeverageScores ridge_leverage_scores(const Eigen::Ref<const Matrix>& phi, double lambda) {
    if (!phi.allFinite()) throw InputError("ridge_leverage_scores: non-finite feature matrix");
    if (lambda < 0.0) throw ConfigError("ridge_leverage_scores: lambda must be >= 0");
    const Index p = phi.cols();
    Matrix gram = phi.transpose() * phi;
    Matrix regularized = gram;
    regularized.diagonal().array() += lambda;
    Eigen::LDLT<Matrix> ldlt(regularized);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14)
        throw SingularError("ridge leverage system is singular at lambda=" +
                            std::to_string(lambda) + "; increase lambda");
    const Matrix solved = ldlt.solve(gram);
    Vector scores(p);
    for (Index j = 0; j < p; ++j) scores[j] = std::clamp(solved(j, j), 0.0, 1.0);
    return LeverageScores{std::move(scores), lambda};
}

// Per-frequency sampling probabilities: cosine and sine column scores are
// summed so sampling happens at frequency granularity.
inline Vector leverage_probabilities(const LeverageScores& scores) {
    if (scores.scores.size() % 2 != 0)
        throw InputError("leverage scores must pair cosine and sine columns");
    const Index m0 = scores.scores.size() / 2;
    Vector combined = scores.scores.head(m0) + scores.scores.tail(m0);
    const double total = combined.sum();
    if (!(total > 0.0)) throw InputError("leverage resampling: all scores are zero, "
                                         "sampling distribution is degenerate");
    return combined / total;
}

// Resample m frequencies from the candidate set with replacement, with
// probability proportional to combined column leverage. The attached weight
// w_j = 1 / sqrt(m0 p_j) makes the reweighted feature map an unbiased
// estimator of the candidate-set kernel estimate.
inline FrequencyMatrix resample_by_leverage(const FrequencyMatrix& candidates,
                                            const LeverageScores& scores, int m,
                                            std::uint64_t seed) {
    const Index m0 = candidates.omega.rows();
    if (scores.scores.size() != 2 * m0)
        throw InputError("resample_by_leverage: score count does not match candidate count");
    if (m < 1 || m > m0) throw InputError("resample_by_leverage: need 1 <= m <= candidate count");
    const Vector p = leverage_probabilities(scores);
    Vector cdf(m0);
    double acc = 0.0;
    for (Index j = 0; j < m0; ++j) {
        acc += p[j];
        cdf[j] = acc;
    }
    cdf[m0 - 1] = 1.0;
    Rng rng(seed);
    Matrix omega(m, candidates.omega.cols());
    Vector weights(m);
    for (int t = 0; t < m; ++t) {
        const double u = uniform01(rng);
        Index j = std::distance(cdf.data(),
                                std::lower_bound(cdf.data(), cdf.data() + m0, u));
        if (j >= m0) j = m0 - 1;
        omega.row(t) = candidates.omega.row(j);
        weights[t] = 1.0 / std::sqrt(static_cast<double>(m0) * p[j]);
    }
    return FrequencyMatrix{std::move(omega), Provenance::Leverage, std::move(weights), seed};
}

// ---------------------------------------------------------------------------
// Non-stationary pairs and point masses
// ---------------------------------------------------------------------------

// Two frequency matrices drawn from (possibly different) spectral densities.
// With shared_draw both matrices come from the first density and are equal,
// which reduces the non-stationary feature map to the stationary one.
inline std::pair<FrequencyMatrix, FrequencyMatrix> sample_frequency_pairs_nonstationary(
    const KernelSpec& spec1, const KernelSpec& spec2, int m, int d, std::uint64_t seed,
    bool shared_draw = false) {
    FrequencyMatrix omega1 = sample_frequencies_iid(spec1, m, d, seed);
    FrequencyMatrix omega2 =
        shared_draw ? omega1 : sample_frequencies_iid(spec2, m, d, seed + 1);
    omega1.provenance = Provenance::NonstationaryPair;
    omega2.provenance = Provenance::NonstationaryPair;
    return {std::move(omega1), std::move(omega2)};
}

// 1-d frequencies drawn uniformly from a finite set of spectral atoms
// (a delta-comb spectral density).
inline FrequencyMatrix sample_frequencies_point_mass(const std::vector<double>& atoms, int m,
                                                     std::uint64_t seed) {
    if (atoms.empty()) throw ConfigError("point-mass sampling needs at least one atom");
    detail::check_sample_shape(m, 1);
    Rng rng(seed);
    Matrix omega(m, 1);
    const auto n = atoms.size();
    for (int i = 0; i < m; ++i) {
        auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
        if (idx >= n) idx = n - 1;
        omega(i, 0) = atoms[idx];
    }
    return FrequencyMatrix{std::move(omega), Provenance::Iid, Vector(), seed};
}

} // namespace rff
