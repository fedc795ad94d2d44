#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rff/errors.hpp"
#include "rff/kernels.hpp"
#include "rff/spectral.hpp"

namespace rff {

enum class FitMode { Ols, RidgePrimal, RidgeDual, KernelRidge };

// Result of a least-squares style fit. Primal modes populate weights; dual
// modes populate dual_coefficients and retain the training design so that
// predictions on new inputs can form the required inner products.
struct FitResult {
    FitMode mode = FitMode::Ols;
    Vector weights;
    Vector dual_coefficients;
    double lambda = 0.0;
    Matrix training_design;
};

struct CvReport {
    std::vector<double> lambda_grid;
    Matrix fold_mse;  // grid x k
    double best_lambda = 0.0;
    int k = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Solve A x = b for symmetric positive (semi)definite A, refusing systems
// whose condition estimate exceeds 1e12. Never forms an explicit inverse.
inline Vector spd_solve(const Matrix& A, const Vector& b, const std::string& context) {
    Eigen::LDLT<Matrix> ldlt(A);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-12))
        throw SingularError(context);
    return ldlt.solve(b);
}

inline void check_xy(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y) {
    if (X.rows() != y.size()) throw InputError("design matrix and response length differ");
    if (X.rows() == 0) throw InputError("empty design matrix");
    if (!X.allFinite() || !y.allFinite()) throw InputError("non-finite values in fit inputs");
}

} // namespace detail

// Ordinary least squares through the normal equations (X^T X) w = X^T y.
inline FitResult fit_ols(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y) {
    detail::check_xy(X, y);
    const Matrix gram = X.transpose() * X;
    Vector w = detail::spd_solve(gram, X.transpose() * y,
                                 "normal equations are singular or ill-conditioned "
                                 "(perfect multicollinearity or d > N); "
                                 "consider ridge regression");
    return FitResult{FitMode::Ols, std::move(w), Vector(), 0.0, Matrix()};
}

// Primal ridge: (X^T X + lambda I_D) w = X^T y. The identity is D x D,
// matching the system actually being regularized.
inline FitResult fit_ridge_primal(const Eigen::Ref<const Matrix>& X,
                                  const Eigen::Ref<const Vector>& y, double lambda) {
    detail::check_xy(X, y);
    if (lambda < 0.0) throw ConfigError("ridge lambda must be >= 0");
    if (lambda == 0.0) {
        FitResult fit = fit_ols(X, y);
        fit.mode = FitMode::RidgePrimal;
        return fit;
    }
    Matrix gram = X.transpose() * X;
    gram.diagonal().array() += lambda;
    Vector w = detail::spd_solve(gram, X.transpose() * y, "ridge primal system is singular");
    return FitResult{FitMode::RidgePrimal, std::move(w), Vector(), lambda, Matrix()};
}

// Dual ridge: (X X^T + lambda I_N) alpha = y with lambda > 0.
inline FitResult fit_ridge_dual(const Eigen::Ref<const Matrix>& X,
                                const Eigen::Ref<const Vector>& y, double lambda) {
    detail::check_xy(X, y);
    if (!(lambda > 0.0)) throw ConfigError("dual ridge requires lambda > 0");
    Matrix gram = X * X.transpose();
    gram.diagonal().array() += lambda;
    Vector alpha = detail::spd_solve(gram, y, "ridge dual system is singular");
    return FitResult{FitMode::RidgeDual, Vector(), std::move(alpha), lambda, X};
}

// Kernel ridge: (K + lambda I) alpha = y for a symmetric PSD kernel matrix.
inline FitResult fit_kernel_ridge(const Eigen::Ref<const Matrix>& K,
                                  const Eigen::Ref<const Vector>& y, double lambda) {
    if (K.rows() != K.cols()) throw InputError("kernel matrix must be square");
    if (K.rows() != y.size()) throw InputError("kernel matrix and response length differ");
    if (!(lambda > 0.0)) throw ConfigError("kernel ridge requires lambda > 0");
    if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw InputError("kernel matrix is not symmetric");
    Matrix system = K;
    system.diagonal().array() += lambda;
    Vector alpha = detail::spd_solve(system, y, "kernel ridge system is singular");
    return FitResult{FitMode::KernelRidge, Vector(), std::move(alpha), lambda, Matrix()};
}

// Unpenalized least squares that tolerates rank deficiency: a complete
// orthogonal decomposition returns the minimum-norm solution of
// min ||y - X w|| for any shape and numerical rank of X.
inline FitResult fit_least_squares(const Eigen::Ref<const Matrix>& X,
                                   const Eigen::Ref<const Vector>& y) {
    detail::check_xy(X, y);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(X);
    return FitResult{FitMode::Ols, cod.solve(y), Vector(), 0.0, Matrix()};
}

// Predict from raw inputs. Dual fits use the retained training design.
inline Vector predict(const FitResult& fit, const Eigen::Ref<const Matrix>& X_new) {
    switch (fit.mode) {
        case FitMode::Ols:
        case FitMode::RidgePrimal:
            if (X_new.cols() != fit.weights.size())
                throw InputError("predict: input has " + std::to_string(X_new.cols()) +
                                 " columns, fit expects " + std::to_string(fit.weights.size()));
            return X_new * fit.weights;
        case FitMode::RidgeDual:
            if (fit.training_design.size() == 0)
                throw InputError("predict: dual fit is missing its training design");
            if (X_new.cols() != fit.training_design.cols())
                throw InputError("predict: input dimension does not match training design");
            return X_new * fit.training_design.transpose() * fit.dual_coefficients;
        case FitMode::KernelRidge:
            throw InputError("predict: kernel ridge fits need a cross-kernel matrix; "
                             "use predict_with_kernel");
    }
    throw InputError("predict: unknown fit mode");
}

// Predict from a cross-kernel matrix k(X_new, X_train) for kernel fits.
inline Vector predict_with_kernel(const FitResult& fit, const Eigen::Ref<const Matrix>& k_new) {
    if (fit.mode != FitMode::KernelRidge && fit.mode != FitMode::RidgeDual)
        throw InputError("predict_with_kernel: fit has no dual coefficients");
    if (k_new.cols() != fit.dual_coefficients.size())
        throw InputError("predict_with_kernel: cross-kernel width does not match training size");
    return k_new * fit.dual_coefficients;
}

inline double mse(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& y_hat) {
    if (y.size() != y_hat.size()) throw InputError("mse: vector lengths differ");
    if (y.size() == 0) throw InputError("mse: empty vectors");
    return (y - y_hat).squaredNorm() / static_cast<double>(y.size());
}

// 25 log-spaced points spanning [1e-3, 1e3].
inline std::vector<double> default_lambda_grid() {
    std::vector<double> grid(25);
    for (int i = 0; i < 25; ++i) grid[i] = std::pow(10.0, -3.0 + 6.0 * i / 24.0);
    return grid;
}

namespace detail {

// Deterministic Fisher-Yates shuffle driven by bounded rejection sampling.
inline std::vector<Index> shuffled_indices(Index n, std::uint64_t seed) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    Rng rng(seed);
    for (Index i = n - 1; i > 0; --i) {
        const auto bound = static_cast<std::uint64_t>(i) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = rng();
        } while (r >= limit);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(r % bound)]);
    }
    return idx;
}

// Held-out MSE of primal ridge fits across a lambda grid, computed from one
// eigendecomposition of whichever Gram matrix (feature or data side) is
// smaller. Exactly the primal solution, strong duality supplies the dual form.
inline void ridge_path_fold_mse(const Matrix& X_train, const Vector& y_train,
                                const Matrix& X_val, const Vector& y_val,
                                const std::vector<double>& grid, Matrix& fold_mse, int fold) {
    const Index n = X_train.rows();
    const Index p = X_train.cols();
    if (p <= n) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(X_train.transpose() * X_train);
        const Vector b = eig.eigenvectors().transpose() * (X_train.transpose() * y_train);
        const Matrix V = X_val * eig.eigenvectors();
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const Vector scaled = b.array() / (eig.eigenvalues().array() + grid[g]);
            fold_mse(static_cast<Index>(g), fold) = mse(y_val, V * scaled);
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(X_train * X_train.transpose());
        const Vector c = eig.eigenvectors().transpose() * y_train;
        const Matrix C = X_val * X_train.transpose() * eig.eigenvectors();
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const Vector scaled = c.array() / (eig.eigenvalues().array() + grid[g]);
            fold_mse(static_cast<Index>(g), fold) = mse(y_val, C * scaled);
        }
    }
}

} // namespace detail

// k-fold cross-validation for the ridge parameter. Indices are shuffled once
// from the seed and split into k near-equal folds; best_lambda minimizes the
// mean held-out MSE with ties broken toward the larger lambda.
inline CvReport kfold_cv_lambda(const Eigen::Ref<const Matrix>& X,
                                const Eigen::Ref<const Vector>& y,
                                const std::vector<double>& lambda_grid, int k,
                                std::uint64_t seed) {
    detail::check_xy(X, y);
    if (lambda_grid.empty()) throw InputError("kfold_cv_lambda: empty lambda grid");
    for (double lambda : lambda_grid)
        if (!(lambda > 0.0)) throw ConfigError("kfold_cv_lambda: grid values must be > 0");
    const Index n = X.rows();
    if (k < 2) throw InputError("kfold_cv_lambda: need at least 2 folds");
    if (n < k) throw InputError("kfold_cv_lambda: fewer data points than folds");
    const std::vector<Index> order = detail::shuffled_indices(n, seed);

    Matrix fold_mse(static_cast<Index>(lambda_grid.size()), k);
    for (int f = 0; f < k; ++f) {
        const Index lo = n * f / k;
        const Index hi = n * (f + 1) / k;
        const Index n_val = hi - lo;
        Matrix X_train(n - n_val, X.cols()), X_val(n_val, X.cols());
        Vector y_train(n - n_val), y_val(n_val);
        Index it = 0, iv = 0;
        for (Index i = 0; i < n; ++i) {
            if (i >= lo && i < hi) {
                X_val.row(iv) = X.row(order[static_cast<std::size_t>(i)]);
                y_val[iv++] = y[order[static_cast<std::size_t>(i)]];
            } else {
                X_train.row(it) = X.row(order[static_cast<std::size_t>(i)]);
                y_train[it++] = y[order[static_cast<std::size_t>(i)]];
            }
        }
        detail::ridge_path_fold_mse(X_train, y_train, X_val, y_val, lambda_grid, fold_mse, f);
    }

    double best_lambda = lambda_grid.front();
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
        const double mean = fold_mse.row(static_cast<Index>(g)).mean();
        if (mean < best_mse || (mean == best_mse && lambda_grid[g] > best_lambda)) {
            best_mse = mean;
            best_lambda = lambda_grid[g];
        }
    }
    return CvReport{lambda_grid, std::move(fold_mse), best_lambda, k, seed};
}

} // namespace rff
