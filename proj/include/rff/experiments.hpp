#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rff/data.hpp"
#include "rff/errors.hpp"
#include "rff/features.hpp"
#include "rff/kernels.hpp"
#include "rff/model_io.hpp"
#include "rff/regression.hpp"
#include "rff/report.hpp"
#include "rff/spectral.hpp"

namespace rff {

enum class Sampler { Iid, Qmc, Orf, Leverage };

inline std::string sampler_name(Sampler s) {
    switch (s) {
        case Sampler::Iid: return "iid";
        case Sampler::Qmc: return "qmc";
        case Sampler::Orf: return "orf";
        case Sampler::Leverage: return "leverage";
    }
    throw ConfigError("unknown sampler");
}

inline Sampler sampler_from_name(const std::string& name) {
    if (name == "iid") return Sampler::Iid;
    if (name == "qmc") return Sampler::Qmc;
    if (name == "orf") return Sampler::Orf;
    if (name == "leverage") return Sampler::Leverage;
    throw ConfigError("unknown sampler '" + name + "'");
}

// Resolved configuration of a single command invocation. Derived seeds are
// fixed offsets of the base seed: data +0, split +1, frequencies +2, cross
// validation +3, function coefficients +4.
struct RunConfig {
    std::uint64_t seed = 42;
    KernelSpec kernel;
    Sampler sampler = Sampler::Iid;
    std::vector<Sampler> samplers{Sampler::Iid};
    int m = 100;
    std::vector<int> m_list;
    std::optional<double> lambda;
    int cv_folds = 5;
    int n_points = 0;          // 0 -> per-command default
    double train_fraction = 0; // 0 -> per-command default
    int samples = 1;
    std::vector<double> point_masses;
    bool timing = false;
    std::string out;
    std::string data_csv;   // fit / predict input
    std::string model_file; // predict input
};

namespace detail {

inline std::uint64_t seed_data(const RunConfig& c) { return c.seed; }
inline std::uint64_t seed_split(const RunConfig& c) { return c.seed + 1; }
inline std::uint64_t seed_omega(const RunConfig& c) { return c.seed + 2; }
inline std::uint64_t seed_cv(const RunConfig& c) { return c.seed + 3; }
inline std::uint64_t seed_coeffs(const RunConfig& c) { return c.seed + 4; }

inline std::string kernel_echo(const KernelSpec& k) {
    std::string line = "kernel=" + family_name(k.family) + " sigma=" + format_double(k.sigma);
    switch (k.family) {
        case KernelFamily::SquaredExponential:
        case KernelFamily::Laplacian:
            line += " lengthscale=" + format_double(k.lengthscale);
            break;
        case KernelFamily::Matern:
            line += " lengthscale=" + format_double(k.lengthscale) +
                    " smoothness=" + format_double(k.smoothness);
            break;
        case KernelFamily::Cauchy:
            break;
        case KernelFamily::Polynomial:
            line += " theta=" + format_double(k.theta) + " degree=" + std::to_string(k.degree);
            break;
    }
    return line;
}

inline std::vector<std::string> echo_config(const std::string& command, const RunConfig& c,
                                            const std::vector<std::string>& extra = {}) {
    std::vector<std::string> lines;
    lines.push_back("command=" + command);
    lines.push_back("seed=" + std::to_string(c.seed));
    lines.push_back(kernel_echo(c.kernel));
    for (const auto& e : extra) lines.push_back(e);
    return lines;
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

inline std::string join_samplers(const std::vector<Sampler>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + sampler_name(v[i]);
    return s;
}

} // namespace detail

// Frequency matrix for the configured sampler. Leverage sampling needs the
// design matrix the feature columns are scored on.
inline FrequencyMatrix build_frequencies(Sampler sampler, const KernelSpec& spec, int m, int d,
                                         std::uint64_t seed,
                                         const Matrix* X_for_leverage = nullptr,
                                         double lambda_lrff = 1.0) {
    switch (sampler) {
        case Sampler::Iid: return sample_frequencies_iid(spec, m, d, seed);
        case Sampler::Qmc: return sample_frequencies_qmc(spec, m, d);
        case Sampler::Orf: return sample_frequencies_orf(spec, m, d, seed);
        case Sampler::Leverage:
            if (X_for_leverage == nullptr)
                throw ConfigError("leverage sampling needs a dataset to score features on");
            return sample_frequencies_leverage(spec, *X_for_leverage, m, lambda_lrff, seed);
    }
    throw ConfigError("unknown sampler");
}

// ---------------------------------------------------------------------------
// psd-sample: random functions drawn from a sampled spectral density
// ---------------------------------------------------------------------------

struct PsdOutput {
    Report samples;      // rows (x, sample_id, f)
    Report frequencies;  // rows (index, omega)
};

inline PsdOutput run_psd_sample(const RunConfig& config) {
    const int grid_n = config.n_points > 0 ? config.n_points : 512;
    if (grid_n < 2) throw ConfigError("psd-sample: grid resolution must be >= 2");
    if (config.samples < 1) throw ConfigError("psd-sample: need at least one sample");

    FrequencyMatrix omega =
        config.point_masses.empty()
            ? build_frequencies(config.sampler, config.kernel, config.m, 1,
                                detail::seed_omega(config))
            : sample_frequencies_point_mass(config.point_masses, config.m,
                                            detail::seed_omega(config));

    Matrix grid(grid_n, 1);
    for (int t = 0; t < grid_n; ++t)
        grid(t, 0) = 2.0 * std::numbers::pi_v<double> * t / grid_n;

    PsdOutput out;
    out.samples.config_lines = detail::echo_config(
        "psd-sample", config,
        {"sampler=" + sampler_name(config.sampler), "m=" + std::to_string(config.m),
         "samples=" + std::to_string(config.samples), "grid_n=" + std::to_string(grid_n),
         config.point_masses.empty() ? "point-masses=" : ("point-masses=" +
                                                          detail::join_doubles(config.point_masses))});
    out.samples.columns = {"x", "sample_id", "f"};
    Rng coeff_rng(detail::seed_coeffs(config));
    for (int s = 0; s < config.samples; ++s) {
        const Vector f = sample_function(omega, grid, coeff_rng);
        for (int t = 0; t < grid_n; ++t)
            out.samples.add_row({fmt(grid(t, 0)), fmt(s), fmt(f[t])});
    }

    out.frequencies.config_lines = out.samples.config_lines;
    out.frequencies.columns = {"index", "omega"};
    for (Index i = 0; i < omega.omega.rows(); ++i)
        out.frequencies.add_row({fmt(i), fmt(omega.omega(i, 0))});
    return out;
}

// ---------------------------------------------------------------------------
// approx-error: kernel matrix approximation error sweep
// ---------------------------------------------------------------------------

inline Report run_approx_error(const RunConfig& config) {
    const int n = config.n_points > 0 ? config.n_points : 200;
    const std::vector<int> m_list =
        config.m_list.empty() ? std::vector<int>{16, 64, 256, 1024, 4096} : config.m_list;
    const Dataset cloud = gen_spatial(n, detail::seed_data(config));
    const GramMatrix exact = gram_matrix(config.kernel, cloud.X);

    Report report;
    report.config_lines = detail::echo_config(
        "approx-error", config,
        {"samplers=" + detail::join_samplers(config.samplers),
         "m-list=" + detail::join_ints(m_list), "n=" + std::to_string(n),
         "timing=" + std::string(config.timing ? "1" : "0")});
    report.columns = {"m", "sampler", "seed", "max_abs_err", "frobenius_err", "wall_seconds"};
    for (int m : m_list) {
        for (Sampler sampler : config.samplers) {
            const auto start = std::chrono::steady_clock::now();
            const FrequencyMatrix omega =
                build_frequencies(sampler, config.kernel, m, 2, detail::seed_omega(config),
                                  &cloud.X, config.lambda.value_or(1.0));
            const Matrix approx =
                approx_kernel(feature_map(cloud.X, omega, config.kernel.sigma));
            const auto stop = std::chrono::steady_clock::now();
            const Matrix diff = approx - exact.entries;
            const double wall =
                config.timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
            report.add_row({fmt(m), sampler_name(sampler), fmt(config.seed),
                            fmt(diff.cwiseAbs().maxCoeff()), fmt(diff.norm()), fmt(wall)});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// toy-spatial: linear vs kernel regression vs kernel ridge regression
// ---------------------------------------------------------------------------

namespace detail {

struct EvaluatedModel {
    double train_mse = 0.0;
    double test_mse = 0.0;
    double lambda = 0.0;
    bool singular = false;
};

inline EvaluatedModel eval_least_squares(const Matrix& train, const Vector& y_train,
                                         const Matrix& test, const Vector& y_test) {
    EvaluatedModel result;
    try {
        const FitResult fit = fit_least_squares(train, y_train);
        result.train_mse = mse(y_train, predict(fit, train));
        result.test_mse = mse(y_test, predict(fit, test));
    } catch (const SingularError&) {
        result.singular = true;
        result.train_mse = std::numeric_limits<double>::quiet_NaN();
        result.test_mse = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

inline EvaluatedModel eval_ridge_cv(const Matrix& train, const Vector& y_train,
                                    const Matrix& test, const Vector& y_test,
                                    const RunConfig& config) {
    EvaluatedModel result;
    if (config.lambda.has_value()) {
        result.lambda = *config.lambda;
    } else {
        const CvReport cv = kfold_cv_lambda(train, y_train, default_lambda_grid(),
                                            config.cv_folds, seed_cv(config));
        result.lambda = cv.best_lambda;
    }
    const FitResult fit = fit_ridge_primal(train, y_train, result.lambda);
    result.train_mse = mse(y_train, predict(fit, train));
    result.test_mse = mse(y_test, predict(fit, test));
    return result;
}

} // namespace detail

inline Report run_toy_spatial(const RunConfig& config) {
    const int n = config.n_points > 0 ? config.n_points : 500;
    const double fraction = config.train_fraction > 0 ? config.train_fraction : 0.2;
    const Dataset ds = gen_spatial(n, detail::seed_data(config));
    const Split split = train_test_split(n, fraction, detail::seed_split(config));
    const Matrix X_train = take_rows(ds.X, split.train_indices);
    const Matrix X_test = take_rows(ds.X, split.test_indices);
    const Vector y_train = take_elements(ds.y, split.train_indices);
    const Vector y_test = take_elements(ds.y, split.test_indices);

    Report report;
    report.config_lines = detail::echo_config(
        "toy-spatial", config,
        {"sampler=" + sampler_name(config.sampler), "m=" + std::to_string(config.m),
         "lambda=" + (config.lambda ? detail::format_double(*config.lambda) : std::string("cv")),
         "cv-folds=" + std::to_string(config.cv_folds), "n=" + std::to_string(n),
         "train-frac=" + detail::format_double(fraction)});
    report.columns = {"model", "train_mse", "test_mse", "lambda"};

    // Linear model with an intercept column.
    Matrix lin_train(X_train.rows(), X_train.cols() + 1);
    lin_train << Matrix::Ones(X_train.rows(), 1), X_train;
    Matrix lin_test(X_test.rows(), X_test.cols() + 1);
    lin_test << Matrix::Ones(X_test.rows(), 1), X_test;
    const FitResult linear = fit_ols(lin_train, y_train);
    report.add_row({"linear", fmt(mse(y_train, predict(linear, lin_train))),
                    fmt(mse(y_test, predict(linear, lin_test))), fmt(0.0)});

    const FrequencyMatrix omega =
        build_frequencies(config.sampler, config.kernel, config.m, 2,
                          detail::seed_omega(config), &X_train, config.lambda.value_or(1.0));
    const Matrix phi_train = feature_map(X_train, omega, config.kernel.sigma).phi;
    const Matrix phi_test = feature_map(X_test, omega, config.kernel.sigma).phi;

    const detail::EvaluatedModel kr =
        detail::eval_least_squares(phi_train, y_train, phi_test, y_test);
    report.add_row({"kernel_regression", fmt(kr.train_mse), fmt(kr.test_mse), fmt(0.0)});

    const detail::EvaluatedModel krr =
        detail::eval_ridge_cv(phi_train, y_train, phi_test, y_test, config);
    report.add_row(
        {"kernel_ridge", fmt(krr.train_mse), fmt(krr.test_mse), fmt(krr.lambda)});
    return report;
}

// ---------------------------------------------------------------------------
// bias-variance: polynomial degrees on the simulated epidemic
// ---------------------------------------------------------------------------

inline Report run_bias_variance(const RunConfig& config) {
    const int n = config.n_points > 0 ? config.n_points : 500;
    const double fraction =
        config.train_fraction > 0 ? config.train_fraction : 20.0 / static_cast<double>(n);
    const Dataset ds = gen_epidemic(n, detail::seed_data(config));
    const Split split = train_test_split(n, fraction, detail::seed_split(config));
    // x is rescaled by the domain width before the monomial expansion; the
    // column span (and so every MSE) is unchanged, the conditioning is not.
    const Vector x_train = take_elements(ds.X.col(0), split.train_indices) / 50.0;
    const Vector x_test = take_elements(ds.X.col(0), split.test_indices) / 50.0;
    const Vector y_train = take_elements(ds.y, split.train_indices);
    const Vector y_test = take_elements(ds.y, split.test_indices);

    Report report;
    report.config_lines = detail::echo_config(
        "bias-variance", config,
        {"n=" + std::to_string(n), "train-frac=" + detail::format_double(fraction)});
    report.columns = {"degree", "train_mse", "test_mse"};
    for (int degree : {1, 2, 5}) {
        const FitResult fit = fit_ols(polynomial_basis(x_train, degree), y_train);
        report.add_row({fmt(degree),
                        fmt(mse(y_train, predict(fit, polynomial_basis(x_train, degree)))),
                        fmt(mse(y_test, predict(fit, polynomial_basis(x_test, degree))))});
    }
    return report;
}

// ---------------------------------------------------------------------------
// feature-sweep: training/testing error against the number of features
// ---------------------------------------------------------------------------

inline Report run_feature_sweep(const RunConfig& config) {
    const int n = config.n_points > 0 ? config.n_points : 500;
    const double fraction = config.train_fraction > 0 ? config.train_fraction : 0.2;
    const std::vector<int> m_list =
        config.m_list.empty() ? std::vector<int>{16, 32, 64, 128, 256, 512} : config.m_list;
    const Dataset ds = gen_spatial(n, detail::seed_data(config));
    const Split split = train_test_split(n, fraction, detail::seed_split(config));
    const Matrix X_train = take_rows(ds.X, split.train_indices);
    const Matrix X_test = take_rows(ds.X, split.test_indices);
    const Vector y_train = take_elements(ds.y, split.train_indices);
    const Vector y_test = take_elements(ds.y, split.test_indices);

    Report report;
    report.config_lines = detail::echo_config(
        "feature-sweep", config,
        {"sampler=" + sampler_name(config.sampler), "m-list=" + detail::join_ints(m_list),
         "cv-folds=" + std::to_string(config.cv_folds), "n=" + std::to_string(n),
         "train-frac=" + detail::format_double(fraction)});
    report.columns = {"m", "model", "train_mse", "test_mse", "lambda", "status"};

    for (int m : m_list) {
        // Same frequency seed for every m: i.i.d. rows are drawn in order, so
        // the feature sets are nested and training error cannot increase.
        const FrequencyMatrix omega =
            build_frequencies(config.sampler, config.kernel, m, 2, detail::seed_omega(config),
                              &X_train, config.lambda.value_or(1.0));
        const Matrix phi_train = feature_map(X_train, omega, config.kernel.sigma).phi;
        const Matrix phi_test = feature_map(X_test, omega, config.kernel.sigma).phi;

        const detail::EvaluatedModel kr =
            detail::eval_least_squares(phi_train, y_train, phi_test, y_test);
        report.add_row({fmt(m), "kernel_regression", fmt(kr.train_mse), fmt(kr.test_mse),
                        fmt(0.0), kr.singular ? "singular" : "ok"});

        const detail::EvaluatedModel krr =
            detail::eval_ridge_cv(phi_train, y_train, phi_test, y_test, config);
        report.add_row({fmt(m), "kernel_ridge", fmt(krr.train_mse), fmt(krr.test_mse),
                        fmt(krr.lambda), "ok"});
    }
    return report;
}

// ---------------------------------------------------------------------------
// fit / predict: model training and serialized prediction
// ---------------------------------------------------------------------------

inline RffModel run_fit(const RunConfig& config) {
    const Dataset ds = load_csv(config.data_csv);
    const int d = static_cast<int>(ds.X.cols());
    FrequencyMatrix omega =
        build_frequencies(config.sampler, config.kernel, config.m, d,
                          detail::seed_omega(config), &ds.X, config.lambda.value_or(1.0));
    const Matrix phi = feature_map(ds.X, omega, config.kernel.sigma).phi;
    double lambda;
    if (config.lambda.has_value()) {
        lambda = *config.lambda;
    } else {
        lambda = kfold_cv_lambda(phi, ds.y, default_lambda_grid(), config.cv_folds,
                                 detail::seed_cv(config))
                     .best_lambda;
    }
    const FitResult fit = fit_ridge_primal(phi, ds.y, lambda);
    return RffModel{config.kernel, lambda, std::move(omega), fit.weights};
}

inline Report run_predict(const RunConfig& config) {
    const RffModel model = load_model(config.model_file);
    const Matrix X = load_csv_matrix(config.data_csv);
    const Vector y_hat = model.predict(X);
    Report report;
    report.config_lines = {"command=predict", "model=" + config.model_file,
                           "data=" + config.data_csv};
    report.columns = {"row_index", "prediction"};
    for (Index i = 0; i < y_hat.size(); ++i) report.add_row({fmt(i), fmt(y_hat[i])});
    return report;
}

// Companion path for the psd-sample frequency file: "<out>_omega.csv" with a
// trailing ".csv" stripped from out first.
inline std::string companion_frequency_path(const std::string& out) {
    std::string base = out;
    if (base.size() >= 4 && base.substr(base.size() - 4) == ".csv")
        base = base.substr(0, base.size() - 4);
    return base + "_omega.csv";
}

} // namespace rff
