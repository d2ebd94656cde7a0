#include "losscal/multi_control.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "losscal/errors.hpp"
#include "losscal/parallel.hpp"

namespace losscal {

namespace {

void validate_spec_common(const MultiControlSpec& spec) {
    const std::size_t m = spec.alphas.size();
    if (m == 0) {
        throw ConfigError("joint control needs at least one loss");
    }
    if (spec.bounds.size() != m || spec.weights.size() != m) {
        std::ostringstream msg;
        msg << "joint control sizes disagree: " << m << " alphas, " << spec.bounds.size()
            << " bounds, " << spec.weights.size() << " weights";
        throw ConfigError(msg.str());
    }
    if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
        std::ostringstream msg;
        msg << "delta must lie in (0,1), got " << spec.delta;
        throw ConfigError(msg.str());
    }
    double weight_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!std::isfinite(spec.alphas[j])) {
            std::ostringstream msg;
            msg << "alpha for loss " << j << " must be finite";
            throw ConfigError(msg.str());
        }
        if (!(spec.weights[j] > 0.0)) {
            std::ostringstream msg;
            msg << "weight for loss " << j << " must be positive";
            throw ConfigError(msg.str());
        }
        weight_sum += spec.weights[j];
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "confidence weights must sum to 1, got " << weight_sum;
        throw ConfigError(msg.str());
    }
}

}  // namespace

MultiControlSpec::MultiControlSpec(std::vector<double> alphas_, double delta_,
                                   std::vector<LossBound> bounds_)
    : MultiControlSpec(std::move(alphas_), delta_, std::move(bounds_),
                       std::vector<double>{}) {}

MultiControlSpec::MultiControlSpec(std::vector<double> alphas_, double delta_,
                                   std::vector<LossBound> bounds_, std::vector<double> weights_)
    : alphas(std::move(alphas_)), delta(delta_), bounds(std::move(bounds_)),
      weights(std::move(weights_)) {
    if (weights.empty() && !alphas.empty()) {
        weights.assign(alphas.size(), 1.0 / static_cast<double>(alphas.size()));
    }
    validate_spec_common(*this);
}

LossTensor::LossTensor(std::vector<LossMatrix> per_loss, bool decomposable)
    : per_loss_(std::move(per_loss)), decomposable_(decomposable) {
    if (per_loss_.empty()) {
        throw ConfigError("loss tensor needs at least one loss");
    }
    const auto& grid = per_loss_.front().grid();
    const std::size_t n = per_loss_.front().sample_count();
    for (std::size_t j = 1; j < per_loss_.size(); ++j) {
        if (!(per_loss_[j].grid() == grid)) {
            std::ostringstream msg;
            msg << "loss " << j << " uses a different grid than loss 0";
            throw ConfigError(msg.str());
        }
        if (per_loss_[j].sample_count() != n) {
            std::ostringstream msg;
            msg << "loss " << j << " has " << per_loss_[j].sample_count()
                << " samples, expected " << n;
            throw ConfigError(msg.str());
        }
    }
    if (decomposable_) {
        if (grid.dim() != per_loss_.size()) {
            std::ostringstream msg;
            msg << "decomposable tensor needs one grid coordinate per loss: "
                << per_loss_.size() << " losses over a dimension-" << grid.dim() << " grid";
            throw ConfigError(msg.str());
        }
        for (std::size_t j = 0; j < per_loss_.size(); ++j) {
            std::map<double, std::size_t> representative;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double coord = grid[k][j];
                const auto [it, inserted] = representative.emplace(coord, k);
                if (inserted) continue;
                const std::size_t rep = it->second;
                for (std::size_t i = 0; i < n; ++i) {
                    if (per_loss_[j].at(i, k) != per_loss_[j].at(i, rep)) {
                        std::ostringstream msg;
                        msg << "tensor is not decomposable: loss " << j
                            << " differs between grid points " << rep << " and " << k
                            << ", which share coordinate " << j;
                        throw ConfigError(msg.str());
                    }
                }
            }
        }
    }
}

LossTensor tensor_from_axes(const std::vector<LossMatrix>& axes) {
    if (axes.empty()) {
        throw ConfigError("need at least one axis matrix");
    }
    const std::size_t n = axes.front().sample_count();
    std::vector<std::vector<double>> axis_values;
    for (std::size_t j = 0; j < axes.size(); ++j) {
        if (axes[j].grid().dim() != 1) {
            std::ostringstream msg;
            msg << "axis " << j << " must use a scalar grid";
            throw ConfigError(msg.str());
        }
        if (axes[j].sample_count() != n) {
            std::ostringstream msg;
            msg << "axis " << j << " has " << axes[j].sample_count()
                << " samples, expected " << n;
            throw ConfigError(msg.str());
        }
        axis_values.push_back(axes[j].grid().axis_values(0));
    }
    const ParamGrid grid = ParamGrid::product(axis_values);

    std::vector<LossMatrix> per_loss;
    per_loss.reserve(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) {
        const auto& vals = axis_values[j];
        std::vector<double> values(n * grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto it = std::lower_bound(vals.begin(), vals.end(), grid[k][j]);
            const auto axis_k = static_cast<std::size_t>(std::distance(vals.begin(), it));
            for (std::size_t i = 0; i < n; ++i) {
                values[i * grid.size() + k] = axes[j].at(i, axis_k);
            }
        }
        per_loss.emplace_back(std::move(values), n, grid);
    }
    return LossTensor(std::move(per_loss), true);
}

std::vector<std::vector<double>> feasibility_quantiles_multi(const LossTensor& tensor,
                                                             const MultiControlSpec& spec) {
    const std::size_t m = tensor.loss_count();
    if (spec.loss_count() != m) {
        std::ostringstream msg;
        msg << "spec covers " << spec.loss_count() << " losses, tensor has " << m;
        throw ConfigError(msg.str());
    }
    const std::size_t cols = tensor.grid().size();
    std::vector<std::vector<double>> quantiles(m, std::vector<double>(cols));
    parallel_for(m * cols, [&](std::size_t flat) {
        const std::size_t j = flat / cols;
        const std::size_t k = flat % cols;
        const auto col = tensor.loss(j).column(k);
        quantiles[j][k] = augmented_quantile(col, spec.bounds[j], spec.per_loss_delta(j));
    });
    return quantiles;
}

namespace {

std::vector<std::size_t> joint_feasible(const std::vector<std::vector<double>>& quantiles,
                                        const MultiControlSpec& spec, std::size_t cols) {
    std::vector<std::size_t> feasible;
    for (std::size_t k = 0; k < cols; ++k) {
        bool ok = true;
        for (std::size_t j = 0; j < quantiles.size() && ok; ++j) {
            ok = quantiles[j][k] <= spec.alphas[j];
        }
        if (ok) feasible.push_back(k);
    }
    return feasible;
}

[[noreturn]] void throw_joint_infeasible(const std::vector<std::vector<double>>& quantiles,
                                         const MultiControlSpec& spec) {
    std::vector<std::size_t> culprits;
    for (std::size_t j = 0; j < quantiles.size(); ++j) {
        const bool any = std::any_of(quantiles[j].begin(), quantiles[j].end(),
                                     [&](double q) { return q <= spec.alphas[j]; });
        if (!any) culprits.push_back(j);
    }
    std::ostringstream msg;
    msg << "no feasible lambda for joint control";
    if (culprits.empty()) {
        msg << ": each loss is individually feasible but no grid point satisfies all "
            << quantiles.size() << " at once";
    } else {
        msg << ": losses {";
        for (std::size_t idx = 0; idx < culprits.size(); ++idx) {
            if (idx > 0) msg << ", ";
            msg << culprits[idx];
        }
        msg << "} are individually infeasible at their per-loss levels";
    }
    throw InfeasibleError(msg.str());
}

}  // namespace

std::vector<std::size_t> feasible_set_multi(const LossTensor& tensor,
                                            const MultiControlSpec& spec) {
    return joint_feasible(feasibility_quantiles_multi(tensor, spec), spec,
                          tensor.grid().size());
}

MultiCalibrationResult calibrate_multi(const LossTensor& tensor, const MultiControlSpec& spec,
                                       const SearchFunction& search) {
    auto quantiles = feasibility_quantiles_multi(tensor, spec);
    auto feasible = joint_feasible(quantiles, spec, tensor.grid().size());
    if (feasible.empty()) throw_joint_infeasible(quantiles, spec);

    const auto& grid = tensor.grid();
    std::size_t chosen;
    if (tensor.decomposable() && search.is_max()) {
        // Coordinate j's quantile depends only on that coordinate's value, so
        // each coordinate can be pushed to its own maximum independently.
        GridPoint combined(grid.dim(), 0.0);
        for (std::size_t j = 0; j < grid.dim(); ++j) {
            double best = 0.0;
            bool found = false;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (quantiles[j][k] <= spec.alphas[j]) {
                    const double coord = grid[k][j];
                    if (!found || coord > best) best = coord;
                    found = true;
                }
            }
            if (!found) throw_joint_infeasible(quantiles, spec);
            combined[j] = best;
        }
        const auto idx = grid.index_of(combined);
        if (!idx) {
            throw ConfigError(
                "per-coordinate optima combine to a point outside the grid; "
                "the coordinate search needs a full product grid");
        }
        chosen = *idx;
    } else {
        chosen = search.select(grid, feasible);
    }
    return MultiCalibrationResult{grid[chosen],
                                  chosen,
                                  std::move(feasible),
                                  std::move(quantiles),
                                  spec,
                                  CalibrationMode::Practical,
                                  search.name(),
                                  tensor.sample_count()};
}

MultiAxisCalibrationResult calibrate_per_axis(const std::vector<LossMatrix>& axes,
                                              const MultiControlSpec& spec,
                                              CalibrationMode mode) {
    const std::size_t m = axes.size();
    if (spec.loss_count() != m) {
        std::ostringstream msg;
        msg << "spec covers " << spec.loss_count() << " losses, got " << m << " axes";
        throw ConfigError(msg.str());
    }
    MultiAxisCalibrationResult result;
    result.lambda_star.resize(m);
    result.feasible_per_axis.resize(m);
    result.quantiles_per_axis.resize(m);
    result.mode = mode;

    std::vector<std::size_t> culprits;
    for (std::size_t j = 0; j < m; ++j) {
        if (axes[j].grid().dim() != 1) {
            std::ostringstream msg;
            msg << "axis " << j << " must use a scalar grid";
            throw ConfigError(msg.str());
        }
        const double dj = spec.per_loss_delta(j);
        auto& quantiles = result.quantiles_per_axis[j];
        quantiles.resize(axes[j].grid().size());
        for (std::size_t k = 0; k < quantiles.size(); ++k) {
            const auto col = axes[j].column(k);
            quantiles[k] = mode == CalibrationMode::Practical
                               ? augmented_quantile(col, spec.bounds[j], dj)
                               : full_quantile(col, dj);
        }
        auto& feasible = result.feasible_per_axis[j];
        for (std::size_t k = 0; k < quantiles.size(); ++k) {
            if (quantiles[k] <= spec.alphas[j]) feasible.push_back(k);
        }
        if (feasible.empty()) {
            culprits.push_back(j);
            continue;
        }
        result.lambda_star[j] = axes[j].grid()[feasible.back()][0];
    }
    if (!culprits.empty()) {
        std::ostringstream msg;
        msg << "no feasible lambda for joint control: losses {";
        for (std::size_t idx = 0; idx < culprits.size(); ++idx) {
            if (idx > 0) msg << ", ";
            msg << culprits[idx];
        }
        msg << "} are individually infeasible at their per-loss levels";
        throw InfeasibleError(msg.str());
    }
    return result;
}

Advisory sample_size_advisory(std::size_t n, std::size_t m, double delta) {
    if (m == 0 || !(delta > 0.0 && delta < 1.0)) {
        throw ConfigError("advisory needs m >= 1 and delta in (0,1)");
    }
    const double expected_tail =
        static_cast<double>(n) * delta / static_cast<double>(m);
    if (expected_tail >= 6.0 - 1e-9) {
        return Advisory{true, ""};
    }
    std::ostringstream msg;
    msg << "calibration set likely too small for joint control: n*delta/m = "
        << expected_tail << " < 6, so fewer than 6 losses can exceed the per-loss "
        << "quantile and the augmented quantile degenerates to the bound B";
    return Advisory{false, msg.str()};
}

}  // namespace losscal
