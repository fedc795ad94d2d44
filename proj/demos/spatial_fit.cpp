// Fit the simulated spatial process with a random-feature kernel ridge model
// and report train/test error. Mirrors what `rffbench toy-spatial` emits.

#include <cstdio>

#include "rff/rff.hpp"

int main() {
    const rff::Dataset ds = rff::gen_spatial(500, 42);
    const rff::Split split = rff::train_test_split(500, 0.2, 43);
    const rff::Matrix x_train = rff::take_rows(ds.X, split.train_indices);
    const rff::Matrix x_test = rff::take_rows(ds.X, split.test_indices);
    const rff::Vector y_train = rff::take_elements(ds.y, split.train_indices);
    const rff::Vector y_test = rff::take_elements(ds.y, split.test_indices);

    const rff::KernelSpec kernel;
    const rff::FrequencyMatrix omega = rff::sample_frequencies_iid(kernel, 100, 2, 44);
    const rff::Matrix phi_train = rff::feature_map(x_train, omega).phi;
    const rff::Matrix phi_test = rff::feature_map(x_test, omega).phi;

    const rff::CvReport cv =
        rff::kfold_cv_lambda(phi_train, y_train, rff::default_lambda_grid(), 5, 45);
    const rff::FitResult fit = rff::fit_ridge_primal(phi_train, y_train, cv.best_lambda);

    std::printf("lambda (5-fold CV): %.4f\n", cv.best_lambda);
    std::printf("train mse:          %.4f\n",
                rff::mse(y_train, rff::predict(fit, phi_train)));
    std::printf("test mse:           %.4f\n", rff::mse(y_test, rff::predict(fit, phi_test)));
    return 0;
}
