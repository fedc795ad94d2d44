// Approximate a squared exponential kernel matrix with random Fourier
// features and print the max-entry error for a few feature counts.

#include <cstdio>

#include "rff/rff.hpp"

int main() {
    const rff::KernelSpec kernel;  // SE, sigma = lengthscale = 1
    const rff::Dataset cloud = rff::gen_spatial(200, 7);
    const rff::GramMatrix exact = rff::gram_matrix(kernel, cloud.X);

    std::printf("%8s %12s %12s\n", "m", "iid", "qmc");
    for (int m : {16, 64, 256, 1024, 4096}) {
        const rff::FrequencyMatrix iid = rff::sample_frequencies_iid(kernel, m, 2, 1);
        const rff::FrequencyMatrix qmc = rff::sample_frequencies_qmc(kernel, m, 2);
        const double err_iid =
            (rff::approx_kernel(rff::feature_map(cloud.X, iid)) - exact.entries)
                .cwiseAbs()
                .maxCoeff();
        const double err_qmc =
            (rff::approx_kernel(rff::feature_map(cloud.X, qmc)) - exact.entries)
                .cwiseAbs()
                .maxCoeff();
        std::printf("%8d %12.6f %12.6f\n", m, err_iid, err_qmc);
    }
    return 0;
}
