#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "losscal/grid.hpp"
#include "losscal/loss_matrix.hpp"
#include "losscal/quantiles.hpp"

namespace losscal {

/// Target loss level alpha, confidence complement delta, and the a-priori
/// bound B on the loss. Certifies: P(loss at lambda* <= alpha) >= 1-delta.
struct ControlSpec {
    double alpha;
    double delta;
    LossBound bound;

    ControlSpec(double alpha_, double delta_, LossBound bound_);
};

enum class CalibrationMode { Practical, Ideal };

/// Selection rule s applied to the feasible set. Feasible points are handed
/// over in ascending grid order, so min/max/first are total and reproducible.
/// External rules wrap a user-supplied callable whose choice is validated to
/// be feasible; the engine records its name but cannot inspect it further.
class SearchFunction {
public:
    using ExternalFn = std::function<GridPoint(const std::vector<GridPoint>&)>;

    static SearchFunction min();
    static SearchFunction max();
    static SearchFunction first_in_grid_order();
    static SearchFunction external(std::string name, ExternalFn fn);

    /// Picks one index out of `feasible` (ascending grid indices, nonempty).
    std::size_t select(const ParamGrid& grid, const std::vector<std::size_t>& feasible) const;

    const std::string& name() const { return name_; }
    bool is_max() const { return kind_ == Kind::Max; }

private:
    enum class Kind { Min, Max, First, External };

    SearchFunction(Kind kind, std::string name, ExternalFn fn);

    Kind kind_;
    std::string name_;
    ExternalFn fn_;
};

struct CalibrationResult {
    GridPoint lambda_star;
    std::size_t lambda_index;
    std::vector<std::size_t> feasible;  // ascending grid indices
    std::vector<double> quantiles;      // one per grid point
    ControlSpec spec;
    CalibrationMode mode;
    std::string search_name;
    std::size_t sample_count;
};

/// Conservative 1-delta quantile per grid point, each over the sample losses
/// augmented with the bound B.
std::vector<double> feasibility_quantiles(const LossMatrix& matrix, const ControlSpec& spec);

/// Grid indices whose augmented quantile is <= alpha, ascending.
std::vector<std::size_t> feasible_set(const LossMatrix& matrix, const ControlSpec& spec);

/// Loss-controlling calibration on n calibration samples: lambda* =
/// s({lambda : Q(lambda) <= alpha}) with Q the bound-augmented quantile.
/// Throws InfeasibleError when no grid point qualifies.
CalibrationResult calibrate(const LossMatrix& matrix, const ControlSpec& spec,
                            const SearchFunction& search);

/// Variant used when the losses of all n+1 samples (calibration plus the
/// one being predicted) are available: quantiles are taken over the rows as
/// given, with no bound augmentation. Feasible sets from `calibrate` on the
/// first n rows are always contained in the ones computed here.
std::vector<double> feasibility_quantiles_ideal(const LossMatrix& matrix_with_test,
                                                const ControlSpec& spec);
std::vector<std::size_t> feasible_set_ideal(const LossMatrix& matrix_with_test,
                                            const ControlSpec& spec);
CalibrationResult calibrate_ideal(const LossMatrix& matrix_with_test, const ControlSpec& spec,
                                  const SearchFunction& search);

}  // namespace losscal
