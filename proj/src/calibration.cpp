#include "losscal/calibration.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "losscal/errors.hpp"
#include "losscal/parallel.hpp"

namespace losscal {

ControlSpec::ControlSpec(double alpha_, double delta_, LossBound bound_)
    : alpha(alpha_), delta(delta_), bound(bound_) {
    if (!std::isfinite(alpha)) {
        throw ConfigError("target loss level alpha must be finite");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        std::ostringstream msg;
        msg << "delta must lie in (0,1), got " << delta;
        throw ConfigError(msg.str());
    }
}

SearchFunction::SearchFunction(Kind kind, std::string name, ExternalFn fn)
    : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

SearchFunction SearchFunction::min() { return {Kind::Min, "min", nullptr}; }
SearchFunction SearchFunction::max() { return {Kind::Max, "max", nullptr}; }
SearchFunction SearchFunction::first_in_grid_order() { return {Kind::First, "first", nullptr}; }

SearchFunction SearchFunction::external(std::string name, ExternalFn fn) {
    if (!fn) {
        throw ConfigError("external search function must be callable");
    }
    if (name.empty()) {
        throw ConfigError("external search function needs a nonempty name");
    }
    return {Kind::External, std::move(name), std::move(fn)};
}

std::size_t SearchFunction::select(const ParamGrid& grid,
                                   const std::vector<std::size_t>& feasible) const {
    if (feasible.empty()) {
        throw ConfigError("search over an empty feasible set");
    }
    switch (kind_) {
        case Kind::Min:
        case Kind::First:
            // The grid is sorted ascending, so the first feasible index is
            // both the lexicographic minimum and the first in grid order.
            return feasible.front();
        case Kind::Max:
            return feasible.back();
        case Kind::External: {
            std::vector<GridPoint> candidates;
            candidates.reserve(feasible.size());
            for (std::size_t idx : feasible) candidates.push_back(grid[idx]);
            const GridPoint chosen = fn_(candidates);
            const auto grid_idx = grid.index_of(chosen);
            if (grid_idx) {
                for (std::size_t idx : feasible) {
                    if (idx == *grid_idx) return idx;
                }
            }
            std::ostringstream msg;
            msg << "external search '" << name_ << "' returned a point outside the feasible set";
            throw ConfigError(msg.str());
        }
    }
    throw ConfigError("unreachable search kind");
}

namespace {

std::vector<double> column_quantiles(const LossMatrix& matrix,
                                     const std::function<double(std::vector<double>&)>& reduce) {
    std::vector<double> out(matrix.grid().size());
    parallel_for(out.size(), [&](std::size_t k) {
        auto col = matrix.column(k);
        out[k] = reduce(col);
    });
    return out;
}

std::vector<std::size_t> indices_at_or_below(const std::vector<double>& quantiles, double alpha) {
    std::vector<std::size_t> feasible;
    for (std::size_t k = 0; k < quantiles.size(); ++k) {
        if (quantiles[k] <= alpha) feasible.push_back(k);
    }
    return feasible;
}

[[noreturn]] void throw_infeasible(const ControlSpec& spec) {
    std::ostringstream msg;
    msg << "no feasible lambda: loss level alpha=" << spec.alpha
        << " unreachable at confidence 1-delta=" << 1.0 - spec.delta;
    throw InfeasibleError(msg.str());
}

CalibrationResult assemble(const LossMatrix& matrix, const ControlSpec& spec,
                           const SearchFunction& search, std::vector<double> quantiles,
                           CalibrationMode mode) {
    auto feasible = indices_at_or_below(quantiles, spec.alpha);
    if (feasible.empty()) throw_infeasible(spec);
    const std::size_t chosen = search.select(matrix.grid(), feasible);
    return CalibrationResult{matrix.grid()[chosen],
                             chosen,
                             std::move(feasible),
                             std::move(quantiles),
                             spec,
                             mode,
                             search.name(),
                             matrix.sample_count()};
}

}  // namespace

std::vector<double> feasibility_quantiles(const LossMatrix& matrix, const ControlSpec& spec) {
    return column_quantiles(matrix, [&](std::vector<double>& col) {
        return augmented_quantile(col, spec.bound, spec.delta);
    });
}

std::vector<std::size_t> feasible_set(const LossMatrix& matrix, const ControlSpec& spec) {
    return indices_at_or_below(feasibility_quantiles(matrix, spec), spec.alpha);
}

CalibrationResult calibrate(const LossMatrix& matrix, const ControlSpec& spec,
                            const SearchFunction& search) {
    return assemble(matrix, spec, search, feasibility_quantiles(matrix, spec),
                    CalibrationMode::Practical);
}

std::vector<double> feasibility_quantiles_ideal(const LossMatrix& matrix_with_test,
                                                const ControlSpec& spec) {
    return column_quantiles(matrix_with_test, [&](std::vector<double>& col) {
        return full_quantile(col, spec.delta);
    });
}

std::vector<std::size_t> feasible_set_ideal(const LossMatrix& matrix_with_test,
                                            const ControlSpec& spec) {
    return indices_at_or_below(feasibility_quantiles_ideal(matrix_with_test, spec), spec.alpha);
}

CalibrationResult calibrate_ideal(const LossMatrix& matrix_with_test, const ControlSpec& spec,
                                  const SearchFunction& search) {
    return assemble(matrix_with_test, spec, search,
                    feasibility_quantiles_ideal(matrix_with_test, spec), CalibrationMode::Ideal);
}

}  // namespace losscal
