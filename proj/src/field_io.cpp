#include "losscal/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "losscal/csv_io.hpp"
#include "losscal/errors.hpp"

namespace losscal {

namespace {

constexpr char kMagic[4] = {'L', 'C', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;

void check_dataset(const FieldDataset& data) {
    const std::size_t n = data.forecasts.size();
    if (n == 0 || data.labels.size() != n) {
        throw ConfigError("field dataset needs matching forecast and label counts");
    }
    if (data.rows == 0 || data.cols == 0) {
        throw ConfigError("field dataset needs positive dimensions");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (data.forecasts[i].rows != data.rows || data.forecasts[i].cols != data.cols ||
            data.labels[i].rows != data.rows || data.labels[i].cols != data.cols) {
            std::ostringstream msg;
            msg << "sample " << i << " does not match the dataset's field dimensions";
            throw ConfigError(msg.str());
        }
        for (double v : data.forecasts[i].values) {
            if (!(v >= 0.0 && v <= 1.0)) {
                std::ostringstream msg;
                msg << "forecast of sample " << i << " holds " << v
                    << ", outside the probability range [0,1]";
                throw ConfigError(msg.str());
            }
        }
    }
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v, const std::string& name) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) {
        throw IoError(name + ": truncated field dataset");
    }
}

std::string sample_file(const char* kind, std::size_t i) {
    std::string num = std::to_string(i);
    if (num.size() < 4) num.insert(0, 4 - num.size(), '0');
    return std::string(kind) + "_" + num + ".csv";
}

}  // namespace

void write_field_dataset(const std::filesystem::path& path, const FieldDataset& data) {
    check_dataset(data);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint64_t>(data.forecasts.size()));
    write_pod(out, static_cast<std::uint32_t>(data.rows));
    write_pod(out, static_cast<std::uint32_t>(data.cols));
    for (const Field& f : data.forecasts) {
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    }
    for (const GridPredictionSet& label : data.labels) {
        for (std::uint8_t m : label.member) {
            const std::uint8_t bit = m ? 1 : 0;
            write_pod(out, bit);
        }
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

FieldDataset read_field_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("no such input: '" + path.string() + "'");
    }
    const std::string name = path.string();

    char magic[4] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw IoError(name + ": not a field dataset (bad magic)");
    }
    std::uint32_t version = 0;
    read_pod(in, version, name);
    if (version != kVersion) {
        std::ostringstream msg;
        msg << name << ": unsupported field dataset version " << version;
        throw IoError(msg.str());
    }
    std::uint64_t n = 0;
    std::uint32_t rows = 0, cols = 0;
    read_pod(in, n, name);
    read_pod(in, rows, name);
    read_pod(in, cols, name);
    if (n == 0 || rows == 0 || cols == 0) {
        throw IoError(name + ": empty field dataset");
    }

    FieldDataset data;
    data.rows = rows;
    data.cols = cols;
    data.forecasts.reserve(n);
    data.labels.reserve(n);
    const std::size_t cells = static_cast<std::size_t>(rows) * cols;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::vector<double> values(cells);
        in.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(cells * sizeof(double)));
        if (!in) {
            throw IoError(name + ": truncated field dataset");
        }
        for (std::size_t c = 0; c < cells; ++c) {
            if (!(values[c] >= 0.0 && values[c] <= 1.0)) {
                std::ostringstream msg;
                msg << name << ": forecast of sample " << i << ", cell " << c
                    << " is outside the probability range [0,1]";
                throw IoError(msg.str());
            }
        }
        data.forecasts.emplace_back(rows, cols, std::move(values));
    }
    for (std::uint64_t i = 0; i < n; ++i) {
        std::vector<std::uint8_t> member(cells);
        in.read(reinterpret_cast<char*>(member.data()), static_cast<std::streamsize>(cells));
        if (!in) {
            throw IoError(name + ": truncated field dataset");
        }
        for (std::size_t c = 0; c < cells; ++c) {
            if (member[c] > 1) {
                std::ostringstream msg;
                msg << name << ": label of sample " << i << ", cell " << c
                    << " must be 0 or 1, got " << static_cast<int>(member[c]);
                throw IoError(msg.str());
            }
        }
        data.labels.emplace_back(rows, cols, std::move(member));
    }
    return data;
}

void write_field_dataset_csv_dir(const std::filesystem::path& dir, const FieldDataset& data) {
    check_dataset(data);
    std::filesystem::create_directories(dir);

    nlohmann::ordered_json manifest;
    manifest["format"] = "losscal-fields";
    manifest["version"] = kVersion;
    manifest["samples"] = data.forecasts.size();
    manifest["rows"] = data.rows;
    manifest["cols"] = data.cols;
    {
        std::ofstream out(dir / "manifest.json");
        if (!out) {
            throw IoError("cannot open '" + (dir / "manifest.json").string() + "' for writing");
        }
        out << manifest.dump(2) << '\n';
    }

    for (std::size_t i = 0; i < data.forecasts.size(); ++i) {
        const auto fpath = dir / sample_file("forecast", i);
        std::ofstream out(fpath);
        if (!out) {
            throw IoError("cannot open '" + fpath.string() + "' for writing");
        }
        const Field& f = data.forecasts[i];
        for (std::size_t p = 0; p < f.rows; ++p) {
            for (std::size_t q = 0; q < f.cols; ++q) {
                if (q > 0) out << ',';
                out << format_double(f.at(p, q));
            }
            out << '\n';
        }
    }
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        const auto lpath = dir / sample_file("labels", i);
        std::ofstream out(lpath);
        if (!out) {
            throw IoError("cannot open '" + lpath.string() + "' for writing");
        }
        const GridPredictionSet& label = data.labels[i];
        for (std::size_t p = 0; p < label.rows; ++p) {
            for (std::size_t q = 0; q < label.cols; ++q) {
                if (q > 0) out << ',';
                out << (label.contains(p, q) ? '1' : '0');
            }
            out << '\n';
        }
    }
}

namespace {

std::vector<std::string> read_grid_lines(const std::filesystem::path& path, std::size_t rows,
                                         std::size_t cols) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("no such input: '" + path.string() + "'");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    if (lines.size() != rows) {
        std::ostringstream msg;
        msg << path.string() << ": expected " << rows << " rows, got " << lines.size();
        throw IoError(msg.str());
    }
    for (std::size_t p = 0; p < rows; ++p) {
        if (split_fields(lines[p], ',').size() != cols) {
            std::ostringstream msg;
            msg << path.string() << ": line " << p + 1 << ": expected " << cols << " values";
            throw IoError(msg.str());
        }
    }
    return lines;
}

}  // namespace

FieldDataset read_field_dataset_csv_dir(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) {
        throw IoError("no such input: '" + manifest_path.string() + "'");
    }
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(manifest_path.string() + ": " + e.what());
    }
    if (!manifest.is_object() || manifest.value("format", "") != "losscal-fields") {
        throw IoError(manifest_path.string() + ": not a field dataset manifest");
    }
    if (manifest.value("version", 0u) != kVersion) {
        throw IoError(manifest_path.string() + ": unsupported field dataset version");
    }
    std::size_t n = 0, rows = 0, cols = 0;
    try {
        n = manifest.at("samples").get<std::size_t>();
        rows = manifest.at("rows").get<std::size_t>();
        cols = manifest.at("cols").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(manifest_path.string() + ": " + e.what());
    }
    if (n == 0 || rows == 0 || cols == 0) {
        throw IoError(manifest_path.string() + ": empty field dataset");
    }

    FieldDataset data;
    data.rows = rows;
    data.cols = cols;
    data.forecasts.reserve(n);
    data.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto fpath = dir / sample_file("forecast", i);
        const auto lines = read_grid_lines(fpath, rows, cols);
        std::vector<double> values;
        values.reserve(rows * cols);
        for (std::size_t p = 0; p < rows; ++p) {
            const auto cells = split_fields(lines[p], ',');
            for (std::size_t q = 0; q < cols; ++q) {
                std::ostringstream ctx;
                ctx << fpath.string() << ": line " << p + 1 << ", column " << q + 1;
                const double v = parse_double(cells[q], ctx.str());
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw IoError(ctx.str() + ": value outside the probability range [0,1]");
                }
                values.push_back(v);
            }
        }
        data.forecasts.emplace_back(rows, cols, std::move(values));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto lpath = dir / sample_file("labels", i);
        const auto lines = read_grid_lines(lpath, rows, cols);
        std::vector<std::uint8_t> member;
        member.reserve(rows * cols);
        for (std::size_t p = 0; p < rows; ++p) {
            const auto cells = split_fields(lines[p], ',');
            for (std::size_t q = 0; q < cols; ++q) {
                if (cells[q] == "0") {
                    member.push_back(0);
                } else if (cells[q] == "1") {
                    member.push_back(1);
                } else {
                    std::ostringstream msg;
                    msg << lpath.string() << ": line " << p + 1 << ", column " << q + 1
                        << ": labels must be 0 or 1, got '" << cells[q] << "'";
                    throw IoError(msg.str());
                }
            }
        }
        data.labels.emplace_back(rows, cols, std::move(member));
    }
    return data;
}

}  // namespace losscal
