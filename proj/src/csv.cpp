#include "fmcit/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fmcit/error.hpp"

namespace fmcit {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DataMatrix load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line)) throw CsvError(path + ": empty file");
    DataMatrix out;
    out.names = split_line(strip_cr(line));
    const auto width = out.names.size();
    if (width == 0) throw CsvError(path + ": empty header");

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != width) {
            throw CsvError(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(width) + " columns, got " + std::to_string(cells.size()));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            const std::string& cell = cells[c];
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw CsvError(path + ":" + std::to_string(line_no) + ": column '" +
                               out.names[c] + "' is not numeric: '" + cell + "'");
            }
            if (!std::isfinite(v)) {
                throw CsvError(path + ":" + std::to_string(line_no) + ": column '" +
                               out.names[c] + "' holds a non-finite value");
            }
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(path + ": no data rows");

    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return out;
}

void save_csv(const DataMatrix& data, const std::string& path) {
    if (static_cast<Eigen::Index>(data.names.size()) != data.cols()) {
        throw DimensionError("column-name count does not match matrix width");
    }
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open for writing: " + path);
    for (std::size_t c = 0; c < data.names.size(); ++c) {
        out << (c ? "," : "") << data.names[c];
    }
    out << '\n';
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            out << (c ? "," : "") << format_double(data.values(r, c));
        }
        out << '\n';
    }
}

}  // namespace fmcit
