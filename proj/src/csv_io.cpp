#include "losscal/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "losscal/errors.hpp"

namespace losscal {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
        std::ostringstream msg;
        msg << context << ": cannot parse '" << text << "' as a number";
        throw IoError(msg.str());
    }
    return value;
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

namespace {

constexpr std::string_view kColumnPrefix = "lambda_";

std::string grid_point_header(const GridPoint& p) {
    std::string cell(kColumnPrefix);
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j > 0) cell += ';';
        cell += format_double(p[j]);
    }
    return cell;
}

}  // namespace

void write_loss_matrix_csv(const std::filesystem::path& path, const LossMatrix& matrix) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    const auto& grid = matrix.grid();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k > 0) out << ',';
        out << grid_point_header(grid[k]);
    }
    out << '\n';
    for (std::size_t i = 0; i < matrix.sample_count(); ++i) {
        const auto row = matrix.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0) out << ',';
            out << format_double(row[k]);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

LossMatrix read_loss_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("no such input: '" + path.string() + "'");
    }
    const std::string name = path.string();

    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(name + ": empty file, expected a lambda_... header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_fields(line, ',');
    std::vector<GridPoint> points;
    points.reserve(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
        const std::string& cell = header[k];
        if (cell.rfind(kColumnPrefix, 0) != 0) {
            std::ostringstream msg;
            msg << name << ": line 1, column " << k + 1 << ": expected a '"
                << kColumnPrefix << "' header, got '" << cell << "'";
            throw IoError(msg.str());
        }
        GridPoint p;
        for (const auto& coord : split_fields(cell.substr(kColumnPrefix.size()), ';')) {
            std::ostringstream ctx;
            ctx << name << ": line 1, column " << k + 1;
            p.push_back(parse_double(coord, ctx.str()));
        }
        points.push_back(std::move(p));
    }

    // Columns may arrive in any order; compute the permutation that puts them
    // into the canonical sorted order the grid will adopt.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    std::vector<GridPoint> sorted_points;
    sorted_points.reserve(points.size());
    for (std::size_t src : order) sorted_points.push_back(points[src]);

    ParamGrid grid = [&] {
        try {
            return ParamGrid(std::move(sorted_points));
        } catch (const ConfigError& e) {
            throw IoError(name + ": invalid header: " + e.what());
        }
    }();

    std::vector<double> values;
    std::size_t n = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_fields(line, ',');
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << name << ": line " << line_no << ": expected " << header.size()
                << " values, got " << cells.size();
            throw IoError(msg.str());
        }
        std::vector<double> row(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k) {
            std::ostringstream ctx;
            ctx << name << ": line " << line_no << ", column " << k + 1;
            row[k] = parse_double(cells[k], ctx.str());
        }
        for (std::size_t src : order) values.push_back(row[src]);
        ++n;
    }
    if (n == 0) {
        throw IoError(name + ": no sample rows after the header");
    }
    try {
        return LossMatrix(std::move(values), n, std::move(grid));
    } catch (const ConfigError& e) {
        throw IoError(name + ": " + e.what());
    }
}

void write_regression_csv(const std::filesystem::path& path, const RegressionDataset& data) {
    const std::size_t n = data.features.size();
    if (n == 0 || data.targets.size() != n) {
        throw ConfigError("regression dataset needs matching feature and target rows");
    }
    const std::size_t dim = data.features.front().size();
    const std::size_t m = data.targets.front().size();
    if (dim == 0 || m == 0) {
        throw ConfigError("regression dataset needs at least one feature and one target column");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (data.features[i].size() != dim || data.targets[i].size() != m) {
            std::ostringstream msg;
            msg << "regression dataset row " << i << " has a mismatched width";
            throw ConfigError(msg.str());
        }
    }

    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    for (std::size_t j = 0; j < dim; ++j) {
        if (j > 0) out << ',';
        out << 'x' << j;
    }
    for (std::size_t j = 0; j < m; ++j) {
        out << ",target" << j;
    }
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (j > 0) out << ',';
            out << format_double(data.features[i][j]);
        }
        for (std::size_t j = 0; j < m; ++j) {
            out << ',' << format_double(data.targets[i][j]);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

RegressionDataset read_regression_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("no such input: '" + path.string() + "'");
    }
    const std::string name = path.string();

    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(name + ": empty file, expected a header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_fields(line, ',');
    std::vector<std::size_t> feature_cols, target_cols;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k].rfind("target", 0) == 0) {
            target_cols.push_back(k);
        } else {
            feature_cols.push_back(k);
        }
    }
    if (feature_cols.empty()) {
        throw IoError(name + ": header names no feature columns");
    }
    if (target_cols.empty()) {
        throw IoError(name + ": header names no target columns (names starting with 'target')");
    }

    RegressionDataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_fields(line, ',');
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << name << ": line " << line_no << ": expected " << header.size()
                << " values, got " << cells.size();
            throw IoError(msg.str());
        }
        std::vector<double> row(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k) {
            std::ostringstream ctx;
            ctx << name << ": line " << line_no << ", column " << k + 1;
            row[k] = parse_double(cells[k], ctx.str());
        }
        std::vector<double> x, y;
        x.reserve(feature_cols.size());
        y.reserve(target_cols.size());
        for (std::size_t k : feature_cols) x.push_back(row[k]);
        for (std::size_t k : target_cols) y.push_back(row[k]);
        data.features.push_back(std::move(x));
        data.targets.push_back(std::move(y));
    }
    if (data.features.empty()) {
        throw IoError(name + ": no sample rows after the header");
    }
    return data;
}

}  // namespace losscal
