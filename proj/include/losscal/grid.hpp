#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace losscal {

/// One candidate parameter value. Scalar parameters are 1-element vectors.
using GridPoint = std::vector<double>;

/// Finite candidate set Λ, held in lexicographic ascending order so that
/// min/max/first-match searches over it are total and reproducible.
class ParamGrid {
public:
    /// Takes ownership of the points, sorts them, and validates: nonempty,
    /// uniform dimension >= 1, all coordinates finite, no duplicates.
    explicit ParamGrid(std::vector<GridPoint> points);

    /// Evenly spaced scalar grid start, start+step, ..., up to stop.
    static ParamGrid linspace(double start, double stop, double step);

    /// Scalar grid from explicit values.
    static ParamGrid from_values(std::vector<double> values);

    /// Cartesian product of per-coordinate axes, in lexicographic order.
    static ParamGrid product(const std::vector<std::vector<double>>& axes);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return points_.front().size(); }
    const GridPoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<GridPoint>& points() const { return points_; }

    /// Index of an exactly matching point, or nullopt.
    std::optional<std::size_t> index_of(const GridPoint& p) const;

    /// Distinct values taken by one coordinate, ascending.
    std::vector<double> axis_values(std::size_t coord) const;

    bool operator==(const ParamGrid& other) const { return points_ == other.points_; }

private:
    std::vector<GridPoint> points_;
};

}  // namespace losscal
