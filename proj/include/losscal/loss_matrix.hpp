#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "losscal/errors.hpp"
#include "losscal/grid.hpp"
#include "losscal/parallel.hpp"

namespace losscal {

/// Precomputed losses L_i(λ) for n calibration samples over a grid of
/// candidate parameters; row i, column k holds the loss of sample i at grid
/// point k. All entries must be finite.
class LossMatrix {
public:
    LossMatrix(std::vector<double> values, std::size_t n, ParamGrid grid);

    double at(std::size_t i, std::size_t k) const {
        return values_[i * grid_.size() + k];
    }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * grid_.size(), grid_.size()};
    }
    /// Losses of every sample at grid point k, in sample order.
    std::vector<double> column(std::size_t k) const;

    std::size_t sample_count() const { return n_; }
    const ParamGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
    std::size_t n_;
    ParamGrid grid_;
};

/// Evaluates loss(i, λ) for every sample index i < n and every grid point λ,
/// rows in parallel. The callable must be pure with respect to (i, λ).
template <typename LossFn>
LossMatrix compute_loss_matrix(std::size_t n, const ParamGrid& grid, LossFn&& loss) {
    if (n == 0) {
        throw ConfigError("compute_loss_matrix: need at least one sample");
    }
    std::vector<double> values(n * grid.size());
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            values[i * grid.size() + k] = loss(i, grid[k]);
        }
    });
    return LossMatrix(std::move(values), n, grid);
}

}  // namespace losscal
