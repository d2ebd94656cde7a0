#include "losscal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "losscal/errors.hpp"

namespace losscal {

ParamGrid::ParamGrid(std::vector<GridPoint> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw ConfigError("parameter grid must contain at least one point");
    }
    const std::size_t d = points_.front().size();
    if (d == 0) {
        throw ConfigError("grid points must have dimension >= 1");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != d) {
            std::ostringstream msg;
            msg << "grid point " << i << " has dimension " << points_[i].size()
                << ", expected " << d;
            throw ConfigError(msg.str());
        }
        for (double c : points_[i]) {
            if (!std::isfinite(c)) {
                std::ostringstream msg;
                msg << "grid point " << i << " has a non-finite coordinate";
                throw ConfigError(msg.str());
            }
        }
    }
    std::sort(points_.begin(), points_.end());
    const auto dup = std::adjacent_find(points_.begin(), points_.end());
    if (dup != points_.end()) {
        std::ostringstream msg;
        msg << "duplicate grid point at sorted index "
            << std::distance(points_.begin(), dup);
        throw ConfigError(msg.str());
    }
}

ParamGrid ParamGrid::linspace(double start, double stop, double step) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
        throw ConfigError("linspace endpoints and step must be finite");
    }
    if (step <= 0.0) {
        throw ConfigError("linspace step must be positive");
    }
    if (stop < start) {
        throw ConfigError("linspace stop must be >= start");
    }
    const auto count =
        static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<GridPoint> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back({start + static_cast<double>(i) * step});
    }
    return ParamGrid(std::move(pts));
}

ParamGrid ParamGrid::from_values(std::vector<double> values) {
    std::vector<GridPoint> pts;
    pts.reserve(values.size());
    for (double v : values) pts.push_back({v});
    return ParamGrid(std::move(pts));
}

ParamGrid ParamGrid::product(const std::vector<std::vector<double>>& axes) {
    if (axes.empty()) {
        throw ConfigError("grid product needs at least one axis");
    }
    std::size_t total = 1;
    for (std::size_t j = 0; j < axes.size(); ++j) {
        if (axes[j].empty()) {
            std::ostringstream msg;
            msg << "grid product axis " << j << " is empty";
            throw ConfigError(msg.str());
        }
        total *= axes[j].size();
    }
    std::vector<GridPoint> pts;
    pts.reserve(total);
    GridPoint current(axes.size(), 0.0);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t j = 0; j < axes.size(); ++j) current[j] = axes[j][idx[j]];
        pts.push_back(current);
        for (std::size_t j = axes.size(); j-- > 0;) {
            if (++idx[j] < axes[j].size()) break;
            idx[j] = 0;
        }
    }
    return ParamGrid(std::move(pts));
}

std::optional<std::size_t> ParamGrid::index_of(const GridPoint& p) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(std::distance(points_.begin(), it));
}

std::vector<double> ParamGrid::axis_values(std::size_t coord) const {
    if (coord >= dim()) {
        std::ostringstream msg;
        msg << "axis " << coord << " out of range for dimension " << dim();
        throw ConfigError(msg.str());
    }
    std::vector<double> vals;
    vals.reserve(points_.size());
    for (const auto& p : points_) vals.push_back(p[coord]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

}  // namespace losscal
