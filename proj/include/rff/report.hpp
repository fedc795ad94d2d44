#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rff/data.hpp"
#include "rff/errors.hpp"

namespace rff {

// Tabular command output: '#'-prefixed config echo lines, a schema header
// row, then comma-separated data rows. Cells are preformatted strings so a
// report always serializes to the same bytes.
struct Report {
    std::vector<std::string> config_lines;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != columns.size())
            throw InputError("report row has " + std::to_string(cells.size()) +
                             " cells, schema has " + std::to_string(columns.size()));
        rows.push_back(std::move(cells));
    }

    std::string to_string() const {
        std::ostringstream out;
        for (const auto& line : config_lines) out << "# " << line << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? "," : "");
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << row[c] << (c + 1 < row.size() ? "," : "");
            out << "\n";
        }
        return out.str();
    }
};

inline std::string fmt(double v) { return detail::format_double(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(Index v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

inline void write_report(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << report.to_string();
    if (!out) throw InputError("failed while writing '" + path + "'");
}

} // namespace rff
