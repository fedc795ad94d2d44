#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

#include "rff/errors.hpp"

namespace rff {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class KernelFamily {
    SquaredExponential,
    Matern,
    Cauchy,
    Laplacian,
    Polynomial,
};

// Kernel family plus hyperparameters. Each family reads only the fields it
// needs; the rest are carried along unvalidated.
//   SquaredExponential: sigma, lengthscale
//   Matern:             sigma, lengthscale, smoothness
//   Laplacian:          sigma, lengthscale (rate = 1/lengthscale)
//   Cauchy:             sigma (unit distance scale)
//   Polynomial:         theta, degree
struct KernelSpec {
    KernelFamily family = KernelFamily::SquaredExponential;
    double sigma = 1.0;       // output scale, k(x,x) = sigma^2
    double lengthscale = 1.0; // distance scale
    double smoothness = 1.5;  // Matern nu
    double theta = 1.0;       // polynomial offset
    int degree = 2;           // polynomial degree
};

inline bool is_shift_invariant(KernelFamily family) {
    return family != KernelFamily::Polynomial;
}

inline std::string family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::SquaredExponential: return "se";
        case KernelFamily::Matern: return "matern";
        case KernelFamily::Cauchy: return "cauchy";
        case KernelFamily::Laplacian: return "laplacian";
        case KernelFamily::Polynomial: return "polynomial";
    }
    throw ConfigError("unknown kernel family");
}

inline KernelFamily family_from_name(const std::string& name) {
    if (name == "se" || name == "gaussian") return KernelFamily::SquaredExponential;
    if (name == "matern") return KernelFamily::Matern;
    if (name == "cauchy") return KernelFamily::Cauchy;
    if (name == "laplacian") return KernelFamily::Laplacian;
    if (name == "polynomial") return KernelFamily::Polynomial;
    throw ConfigError("unknown kernel family '" + name + "'");
}

inline void validate_spec(const KernelSpec& spec) {
    if (!(spec.sigma > 0.0)) throw ConfigError("kernel sigma must be > 0");
    switch (spec.family) {
        case KernelFamily::SquaredExponential:
        case KernelFamily::Laplacian:
            if (!(spec.lengthscale > 0.0)) throw ConfigError("kernel lengthscale must be > 0");
            break;
        case KernelFamily::Matern:
            if (!(spec.lengthscale > 0.0)) throw ConfigError("kernel lengthscale must be > 0");
            if (!(spec.smoothness > 0.0)) throw ConfigError("Matern smoothness must be > 0");
            break;
        case KernelFamily::Cauchy:
            break;
        case KernelFamily::Polynomial:
            if (spec.degree < 1) throw ConfigError("polynomial degree must be >= 1");
            if (spec.theta < 0.0) throw ConfigError("polynomial theta must be >= 0");
            break;
    }
}

namespace detail {

// Matern correlation in terms of the scaled lag r = ||x-z|| / lengthscale.
// The limit at r -> 0 is 1; lags below 1e-12 are treated as zero.
inline double matern_correlation(double r, double nu) {
    if (r < 1e-12) return 1.0;
    const double a = std::sqrt(2.0 * nu) * r;
    const double log_term = (1.0 - nu) * std::numbers::ln2_v<double> - std::lgamma(nu)
                            + nu * std::log(a);
    return std::exp(log_term) * std::cyl_bessel_k(nu, a);
}

} // namespace detail

// Evaluate k(x, z) in closed form.
inline double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                          const Eigen::Ref<const Vector>& z) {
    validate_spec(spec);
    if (x.size() != z.size())
        throw InputError("kernel_eval: x and z have different dimensions");
    const double s2 = spec.sigma * spec.sigma;
    switch (spec.family) {
        case KernelFamily::SquaredExponential: {
            const double d2 = (x - z).squaredNorm();
            return s2 * std::exp(-d2 / (2.0 * spec.lengthscale * spec.lengthscale));
        }
        case KernelFamily::Matern: {
            const double r = (x - z).norm() / spec.lengthscale;
            return s2 * detail::matern_correlation(r, spec.smoothness);
        }
        case KernelFamily::Cauchy: {
            double prod = 1.0;
            for (Index i = 0; i < x.size(); ++i) {
                const double d = x[i] - z[i];
                prod /= 1.0 + d * d;
            }
            return s2 * prod;
        }
        case KernelFamily::Laplacian: {
            const double l1 = (x - z).cwiseAbs().sum();
            return s2 * std::exp(-l1 / spec.lengthscale);
        }
        case KernelFamily::Polynomial: {
            return std::pow(x.dot(z) + spec.theta, spec.degree);
        }
    }
    throw ConfigError("unknown kernel family");
}

struct GramMatrix {
    Matrix entries;
    KernelSpec spec;
};

// Dense kernel matrix over the rows of X. Filled from the upper triangle so
// the result is exactly symmetric.
inline GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& X) {
    validate_spec(spec);
    if (X.rows() == 0) throw InputError("gram_matrix: empty design matrix");
    if (!X.allFinite()) throw InputError("gram_matrix: non-finite entries in design matrix");
    const Index n = X.rows();
    Matrix K(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const double v = kernel_eval(spec, X.row(i).transpose(), X.row(j).transpose());
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return GramMatrix{std::move(K), spec};
}

// Cross-kernel matrix k(A_i, B_j); rows of A against rows of B.
inline Matrix kernel_cross(const KernelSpec& spec, const Eigen::Ref<const Matrix>& A,
                           const Eigen::Ref<const Matrix>& B) {
    validate_spec(spec);
    if (A.cols() != B.cols()) throw InputError("kernel_cross: dimension mismatch");
    Matrix K(A.rows(), B.rows());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < B.rows(); ++j)
            K(i, j) = kernel_eval(spec, A.row(i).transpose(), B.row(j).transpose());
    return K;
}

// Explicit degree-2 monomial lift of a 2-vector: (x1^2, sqrt(2) x1 x2, x2^2).
// Satisfies <phi(x), phi(z)> = <x, z>^2.
inline Eigen::Vector3d poly2_feature_map(const Eigen::Ref<const Vector>& x) {
    if (x.size() != 2) throw InputError("poly2_feature_map: input must be 2-dimensional");
    return {x[0] * x[0], std::numbers::sqrt2_v<double> * x[0] * x[1], x[1] * x[1]};
}

// Truncated Taylor feature map of the 1-d Gaussian kernel exp(-gamma (x-z)^2):
// entry n = exp(-gamma x^2) (sqrt(2 gamma) x)^n / sqrt(n!). Magnitudes are
// accumulated in log space so large n never overflows a naive factorial.
inline Vector gaussian_taylor_features(double x, double gamma, int n_terms) {
    if (n_terms < 1) throw ConfigError("gaussian_taylor_features: n_terms must be >= 1");
    if (!(gamma > 0.0)) throw ConfigError("gaussian_taylor_features: gamma must be > 0");
    Vector phi = Vector::Zero(n_terms);
    if (x == 0.0) {
        phi[0] = 1.0;
        return phi;
    }
    const double log_ax = 0.5 * std::log(2.0 * gamma) + std::log(std::abs(x));
    const double sign = x < 0.0 ? -1.0 : 1.0;
    double sign_n = 1.0;
    for (int n = 0; n < n_terms; ++n) {
        phi[n] = sign_n * std::exp(-gamma * x * x + n * log_ax - 0.5 * std::lgamma(n + 1.0));
        sign_n *= sign;
    }
    return phi;
}

} // namespace rff
