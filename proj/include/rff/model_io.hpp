#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "rff/data.hpp"
#include "rff/errors.hpp"
#include "rff/features.hpp"
#include "rff/kernels.hpp"
#include "rff/spectral.hpp"

namespace rff {

// Trained random-feature ridge model. Leverage column weights, when present,
// are folded into the stored weight vector at save time, so a loaded model
// always predicts through the plain [cos | sin] / sqrt(m) map.
struct RffModel {
    KernelSpec kernel;
    double lambda = 0.0;
    FrequencyMatrix omega;
    Vector weights;  // length 2m, feature-space primal weights

    Vector predict(const Eigen::Ref<const Matrix>& X_new) const {
        if (X_new.cols() != omega.omega.cols())
            throw InputError("model expects " + std::to_string(omega.omega.cols()) +
                             " covariate columns, got " + std::to_string(X_new.cols()));
        return feature_map(X_new, omega, kernel.sigma).phi * weights;
    }
};

// Plain-text model format:
//   line 1: rffmodel v1
//   line 2: family sigma lengthscale smoothness theta degree
//   line 3: lambda m d
//   m lines of frequency rows, then 2m weight lines,
// every number printed with 17 significant digits.
inline void save_model(const RffModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    const Index m = model.omega.omega.rows();
    const Index d = model.omega.omega.cols();
    out << "rffmodel v1\n";
    out << family_name(model.kernel.family) << " " << detail::format_double(model.kernel.sigma)
        << " " << detail::format_double(model.kernel.lengthscale) << " "
        << detail::format_double(model.kernel.smoothness) << " "
        << detail::format_double(model.kernel.theta) << " " << model.kernel.degree << "\n";
    out << detail::format_double(model.lambda) << " " << m << " " << d << "\n";
    Vector weights = model.weights;
    if (model.omega.column_weights.size() > 0) {
        for (Index j = 0; j < m; ++j) {
            weights[j] *= model.omega.column_weights[j];
            weights[m + j] *= model.omega.column_weights[j];
        }
    }
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < d; ++j)
            out << detail::format_double(model.omega.omega(i, j)) << (j + 1 < d ? " " : "\n");
    }
    for (Index i = 0; i < 2 * m; ++i) out << detail::format_double(weights[i]) << "\n";
    if (!out) throw InputError("failed while writing '" + path + "'");
}

namespace detail {

inline std::string next_line(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("model file '" + path + "' is truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace detail

inline RffModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    if (detail::next_line(in, path) != "rffmodel v1")
        throw FormatError("model file '" + path + "' has an unsupported version "
                          "(expected 'rffmodel v1')");
    RffModel model;
    {
        std::istringstream kernel_line(detail::next_line(in, path));
        std::string family;
        if (!(kernel_line >> family >> model.kernel.sigma >> model.kernel.lengthscale >>
              model.kernel.smoothness >> model.kernel.theta >> model.kernel.degree))
            throw FormatError("model file '" + path + "': malformed kernel line");
        model.kernel.family = family_from_name(family);
    }
    Index m = 0, d = 0;
    {
        std::istringstream fit_line(detail::next_line(in, path));
        if (!(fit_line >> model.lambda >> m >> d) || m < 1 || d < 1)
            throw FormatError("model file '" + path + "': malformed fit line");
    }
    model.omega.omega.resize(m, d);
    model.omega.provenance = Provenance::Iid;
    for (Index i = 0; i < m; ++i) {
        std::istringstream row(detail::next_line(in, path));
        for (Index j = 0; j < d; ++j)
            if (!(row >> model.omega.omega(i, j)))
                throw FormatError("model file '" + path + "': malformed frequency row " +
                                  std::to_string(i + 1));
    }
    model.weights.resize(2 * m);
    for (Index i = 0; i < 2 * m; ++i) {
        std::istringstream row(detail::next_line(in, path));
        if (!(row >> model.weights[i]))
            throw FormatError("model file '" + path + "': malformed weight row " +
                              std::to_string(i + 1));
    }
    if (!model.omega.omega.allFinite() || !model.weights.allFinite())
        throw FormatError("model file '" + path + "': non-finite values");
    return model;
}

} // namespace rff
