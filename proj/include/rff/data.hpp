#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rff/errors.hpp"
#include "rff/kernels.hpp"
#include "rff/regression.hpp"
#include "rff/spectral.hpp"

namespace rff {

struct DatasetMeta {
    std::string generator;
    std::uint64_t seed = 0;
    double noise_variance = 0.0;
    std::array<double, 2> domain{0.0, 0.0};
};

struct Dataset {
    Matrix X;
    Vector y;
    DatasetMeta meta;
};

struct Split {
    std::vector<Index> train_indices;
    std::vector<Index> test_indices;
    double train_fraction = 0.0;
};

// Simulated epidemic curve: x uniform on [0, 50],
// y = max(0, 1 + x + 0.2 x^2 + eps) with eps ~ N(0, noise_variance).
// Coordinates are drawn before the noise so the point locations do not
// depend on the noise setting.
inline Dataset gen_epidemic(int n, std::uint64_t seed, double noise_variance = 150.0) {
    if (n < 1) throw InputError("gen_epidemic: n must be >= 1");
    if (noise_variance < 0.0) throw ConfigError("gen_epidemic: noise variance must be >= 0");
    Rng rng(seed);
    Matrix X(n, 1);
    for (int i = 0; i < n; ++i) X(i, 0) = 50.0 * uniform01(rng);
    Vector y(n);
    const double sd = std::sqrt(noise_variance);
    for (int i = 0; i < n; ++i) {
        const double x = X(i, 0);
        const double noise = noise_variance > 0.0 ? sd * draw_normal(rng) : 0.0;
        y[i] = std::max(0.0, 1.0 + x + 0.2 * x * x + noise);
    }
    return Dataset{std::move(X), std::move(y),
                   DatasetMeta{"epidemic", seed, noise_variance, {0.0, 50.0}}};
}

// Simulated spatial process on [-2, 2]^2: y = x1^2 + x2^2 + eps,
// eps ~ N(0, noise_variance).
inline Dataset gen_spatial(int n, std::uint64_t seed, double noise_variance = 1.0) {
    if (n < 1) throw InputError("gen_spatial: n must be >= 1");
    if (noise_variance < 0.0) throw ConfigError("gen_spatial: noise variance must be >= 0");
    Rng rng(seed);
    Matrix X(n, 2);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = -2.0 + 4.0 * uniform01(rng);
        X(i, 1) = -2.0 + 4.0 * uniform01(rng);
    }
    Vector y(n);
    const double sd = std::sqrt(noise_variance);
    for (int i = 0; i < n; ++i) {
        const double noise = noise_variance > 0.0 ? sd * draw_normal(rng) : 0.0;
        y[i] = X(i, 0) * X(i, 0) + X(i, 1) * X(i, 1) + noise;
    }
    return Dataset{std::move(X), std::move(y),
                   DatasetMeta{"spatial", seed, noise_variance, {-2.0, 2.0}}};
}

// Uniformly random disjoint partition with |train| = round(fraction * n).
inline Split train_test_split(Index n, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InputError("train_test_split: fraction must lie in (0, 1)");
    const auto n_train = static_cast<Index>(std::lround(fraction * static_cast<double>(n)));
    if (n_train < 1 || n_train >= n)
        throw InputError("train_test_split: split leaves an empty train or test set");
    std::vector<Index> order = detail::shuffled_indices(n, seed);
    Split split;
    split.train_fraction = fraction;
    split.train_indices.assign(order.begin(), order.begin() + n_train);
    split.test_indices.assign(order.begin() + n_train, order.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

inline Matrix take_rows(const Eigen::Ref<const Matrix>& X, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = X.row(rows[i]);
    return out;
}

inline Vector take_elements(const Eigen::Ref<const Vector>& y, const std::vector<Index>& rows) {
    Vector out(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = y[rows[i]];
    return out;
}

// Vandermonde design: column j holds x^j for j = 0..degree.
inline Matrix polynomial_basis(const Eigen::Ref<const Vector>& x, int degree) {
    if (degree < 0) throw InputError("polynomial_basis: degree must be >= 0");
    Matrix basis(x.size(), degree + 1);
    basis.col(0).setOnes();
    for (int j = 1; j <= degree; ++j) basis.col(j) = basis.col(j - 1).cwiseProduct(x);
    return basis;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw FormatError("CSV cell '" + cell + "' at row " + std::to_string(row) + ", column " +
                          std::to_string(col) + " is not numeric");
    }
    if (pos != cell.size())
        throw FormatError("CSV cell '" + cell + "' at row " + std::to_string(row) + ", column " +
                          std::to_string(col) + " has trailing characters");
    if (!std::isfinite(value))
        throw FormatError("CSV cell at row " + std::to_string(row) + ", column " +
                          std::to_string(col) + " is not finite");
    return value;
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace detail

// Numeric CSV table: header row, comma-separated, '.' decimal point. Returns
// the matrix of all columns; header names via the out parameter if wanted.
inline Matrix load_csv_matrix(const std::string& path, std::vector<std::string>* header = nullptr) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CSV file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("CSV file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> names = detail::split_line(line);
    if (header) *header = names;
    const std::size_t n_cols = names.size();
    std::vector<double> values;
    std::size_t n_rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = detail::split_line(line);
        if (cells.size() != n_cols)
            throw FormatError("CSV row " + std::to_string(n_rows + 1) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(n_cols));
        for (std::size_t c = 0; c < n_cols; ++c)
            values.push_back(detail::parse_cell(cells[c], n_rows + 1, c + 1));
        ++n_rows;
    }
    if (n_rows == 0) throw FormatError("CSV file '" + path + "' has no data rows");
    Matrix out(static_cast<Index>(n_rows), static_cast<Index>(n_cols));
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < n_cols; ++c)
            out(static_cast<Index>(r), static_cast<Index>(c)) = values[r * n_cols + c];
    return out;
}

// Dataset CSV: last column is the response, all prior columns covariates.
inline Dataset load_csv(const std::string& path) {
    const Matrix table = load_csv_matrix(path);
    if (table.cols() < 2)
        throw FormatError("dataset CSV needs at least one covariate column plus a response");
    Dataset ds;
    ds.X = table.leftCols(table.cols() - 1);
    ds.y = table.col(table.cols() - 1);
    ds.meta.generator = "csv";
    return ds;
}

// Write a dataset as CSV with covariate columns x1..xd then response y.
// Values are printed with 17 significant digits so reloading is lossless.
inline void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    for (Index c = 0; c < ds.X.cols(); ++c) out << "x" << (c + 1) << ",";
    out << "y\n";
    for (Index r = 0; r < ds.X.rows(); ++r) {
        for (Index c = 0; c < ds.X.cols(); ++c)
            out << detail::format_double(ds.X(r, c)) << ",";
        out << detail::format_double(ds.y[r]) << "\n";
    }
}

} // namespace rff
