// Command-line harness for the random Fourier feature benchmarks: spectral
// density sampling, kernel approximation error sweeps, the toy spatial
// regression experiment, and model fit/predict round trips. Every command is
// seeded and writes plot-ready CSV with a config echo header.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "rff/rff.hpp"

namespace {

struct CliOptions {
    rff::RunConfig config;
    std::string kernel = "se";
    double sigma = 1.0;
    double lengthscale = 1.0;
    double smoothness = 1.5;
    std::string sampler = "iid";
    std::vector<std::string> samplers;
    std::vector<int> m_list;
    std::vector<double> point_masses;
    double lambda = -1.0;
    bool lambda_set = false;
};

void add_kernel_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--seed", opt.config.seed, "base seed for all randomness");
    cmd->add_option("--kernel", opt.kernel, "kernel family: se|matern|cauchy|laplacian|polynomial");
    cmd->add_option("--sigma", opt.sigma, "kernel output scale");
    cmd->add_option("--lengthscale", opt.lengthscale, "kernel lengthscale");
    cmd->add_option("--smoothness", opt.smoothness, "Matern smoothness");
}

void add_lambda_flag(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--lambda", opt.lambda, "ridge parameter (omit to cross-validate)")
        ->each([&opt](const std::string&) { opt.lambda_set = true; });
    cmd->add_option("--cv-folds", opt.config.cv_folds, "cross-validation fold count");
}

rff::RunConfig resolve(CliOptions& opt) {
    rff::RunConfig config = opt.config;
    config.kernel.family = rff::family_from_name(opt.kernel);
    config.kernel.sigma = opt.sigma;
    config.kernel.lengthscale = opt.lengthscale;
    config.kernel.smoothness = opt.smoothness;
    config.sampler = rff::sampler_from_name(opt.sampler);
    config.samplers.clear();
    if (opt.samplers.empty()) {
        config.samplers.push_back(config.sampler);
    } else {
        for (const auto& s : opt.samplers) config.samplers.push_back(rff::sampler_from_name(s));
    }
    config.m_list = opt.m_list;
    config.point_masses = opt.point_masses;
    if (opt.lambda_set) {
        if (opt.lambda < 0.0) throw rff::ConfigError("--lambda must be >= 0");
        config.lambda = opt.lambda;
    }
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random Fourier feature regression benchmarks"};
    app.require_subcommand(1);

    CliOptions opt;

    auto* psd = app.add_subcommand("psd-sample", "sample random functions from a spectral density");
    add_kernel_flags(psd, opt);
    psd->add_option("--sampler", opt.sampler, "frequency sampler: iid|qmc|orf");
    psd->add_option("--m", opt.config.m, "number of sampled frequencies");
    psd->add_option("--samples", opt.config.samples, "number of random functions");
    psd->add_option("--n", opt.config.n_points, "grid resolution (default 512)");
    psd->add_option("--point-masses", opt.point_masses, "comma-separated spectral atoms")
        ->delimiter(',');
    psd->add_option("--out", opt.config.out, "output CSV path")->required();

    auto* approx = app.add_subcommand("approx-error", "kernel approximation error sweep");
    add_kernel_flags(approx, opt);
    add_lambda_flag(approx, opt);
    approx->add_option("--samplers", opt.samplers, "samplers to compare")->delimiter(',');
    approx->add_option("--m-list", opt.m_list, "feature counts to sweep")->delimiter(',');
    approx->add_option("--n", opt.config.n_points, "cloud size (default 200)");
    approx->add_flag("--timing", opt.config.timing, "record wall-clock seconds per row");
    approx->add_option("--out", opt.config.out, "output CSV path")->required();

    auto* toy = app.add_subcommand("toy-spatial", "linear vs kernel regression vs KRR");
    add_kernel_flags(toy, opt);
    add_lambda_flag(toy, opt);
    toy->add_option("--sampler", opt.sampler, "frequency sampler");
    toy->add_option("--m", opt.config.m, "number of Fourier features (default 100)");
    toy->add_option("--n", opt.config.n_points, "number of points (default 500)");
    toy->add_option("--train-frac", opt.config.train_fraction, "training fraction (default 0.2)");
    toy->add_option("--out", opt.config.out, "output CSV path")->required();

    auto* bias = app.add_subcommand("bias-variance", "polynomial degrees on the epidemic curve");
    add_kernel_flags(bias, opt);
    bias->add_option("--n", opt.config.n_points, "number of points (default 500)");
    bias->add_option("--train-frac", opt.config.train_fraction,
                     "training fraction (default 20/n)");
    bias->add_option("--out", opt.config.out, "output CSV path")->required();

    auto* sweep = app.add_subcommand("feature-sweep", "error against the number of features");
    add_kernel_flags(sweep, opt);
    add_lambda_flag(sweep, opt);
    sweep->add_option("--sampler", opt.sampler, "frequency sampler");
    sweep->add_option("--m-list", opt.m_list, "feature counts to sweep")->delimiter(',');
    sweep->add_option("--n", opt.config.n_points, "number of points (default 500)");
    sweep->add_option("--train-frac", opt.config.train_fraction,
                      "training fraction (default 0.2)");
    sweep->add_option("--out", opt.config.out, "output CSV path")->required();

    auto* fit = app.add_subcommand("fit", "train an RFF ridge model from a dataset CSV");
    add_kernel_flags(fit, opt);
    add_lambda_flag(fit, opt);
    fit->add_option("data", opt.config.data_csv, "dataset CSV (last column is the response)")
        ->required();
    fit->add_option("--sampler", opt.sampler, "frequency sampler");
    fit->add_option("--m", opt.config.m, "number of Fourier features");
    fit->add_option("--out", opt.config.out, "model file path")->required();

    auto* predict = app.add_subcommand("predict", "predict from a saved model");
    predict->add_option("model", opt.config.model_file, "model file from 'fit'")->required();
    predict->add_option("data", opt.config.data_csv, "covariate CSV (no response column)")
        ->required();
    predict->add_option("--out", opt.config.out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (psd->parsed()) {
            const rff::RunConfig config = resolve(opt);
            const rff::PsdOutput out = rff::run_psd_sample(config);
            rff::write_report(out.samples, config.out);
            rff::write_report(out.frequencies, rff::companion_frequency_path(config.out));
        } else if (approx->parsed()) {
            const rff::RunConfig config = resolve(opt);
            rff::write_report(rff::run_approx_error(config), config.out);
        } else if (toy->parsed()) {
            const rff::RunConfig config = resolve(opt);
            rff::write_report(rff::run_toy_spatial(config), config.out);
        } else if (bias->parsed()) {
            const rff::RunConfig config = resolve(opt);
            rff::write_report(rff::run_bias_variance(config), config.out);
        } else if (sweep->parsed()) {
            const rff::RunConfig config = resolve(opt);
            rff::write_report(rff::run_feature_sweep(config), config.out);
        } else if (fit->parsed()) {
            const rff::RunConfig config = resolve(opt);
            rff::save_model(rff::run_fit(config), config.out);
        } else if (predict->parsed()) {
            const rff::RunConfig config = resolve(opt);
            rff::write_report(rff::run_predict(config), config.out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
