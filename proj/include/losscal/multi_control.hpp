#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "losscal/calibration.hpp"
#include "losscal/grid.hpp"
#include "losscal/loss_matrix.hpp"
#include "losscal/quantiles.hpp"

namespace losscal {

/// Joint control of m losses: loss j must stay at or below alphas[j], all
/// simultaneously with probability >= 1-delta. The confidence budget is
/// split across losses by `weights` (uniform unless given), so loss j is
/// checked at level 1 - delta*weights[j].
struct MultiControlSpec {
    std::vector<double> alphas;
    double delta;
    std::vector<LossBound> bounds;
    std::vector<double> weights;

    MultiControlSpec(std::vector<double> alphas_, double delta_, std::vector<LossBound> bounds_);
    MultiControlSpec(std::vector<double> alphas_, double delta_, std::vector<LossBound> bounds_,
                     std::vector<double> weights_);

    std::size_t loss_count() const { return alphas.size(); }
    double per_loss_delta(std::size_t j) const { return delta * weights[j]; }
};

/// Losses of m criteria over a shared grid: loss(j) is the n x |grid| matrix
/// of L_j values. When `decomposable` is requested, the construction verifies
/// that loss j varies with a grid point only through its j-th coordinate,
/// which is what licenses the per-coordinate search.
class LossTensor {
public:
    LossTensor(std::vector<LossMatrix> per_loss, bool decomposable);

    std::size_t loss_count() const { return per_loss_.size(); }
    std::size_t sample_count() const { return per_loss_.front().sample_count(); }
    const ParamGrid& grid() const { return per_loss_.front().grid(); }
    const LossMatrix& loss(std::size_t j) const { return per_loss_[j]; }
    bool decomposable() const { return decomposable_; }

private:
    std::vector<LossMatrix> per_loss_;
    bool decomposable_;
};

/// Builds the decomposable tensor over the product grid of the axes: loss j
/// of sample i at grid point lambda is axes[j]'s loss at lambda's j-th
/// coordinate. All axes must share the sample count.
LossTensor tensor_from_axes(const std::vector<LossMatrix>& axes);

struct MultiCalibrationResult {
    GridPoint lambda_star;
    std::size_t lambda_index;
    std::vector<std::size_t> feasible;           // joint, ascending grid indices
    std::vector<std::vector<double>> quantiles;  // [loss][grid point]
    MultiControlSpec spec;
    CalibrationMode mode;
    std::string search_name;
    std::size_t sample_count;
};

/// Per-loss bound-augmented quantiles at level 1 - delta*weights[j].
std::vector<std::vector<double>> feasibility_quantiles_multi(const LossTensor& tensor,
                                                             const MultiControlSpec& spec);

/// Grid indices feasible for every loss simultaneously, ascending.
std::vector<std::size_t> feasible_set_multi(const LossTensor& tensor,
                                            const MultiControlSpec& spec);

/// Joint calibration. On decomposable tensors with the max search the
/// optimum is found per coordinate and combined; otherwise s is applied to
/// the joint feasible set. Infeasibility diagnostics name the loss indices
/// that are individually infeasible.
MultiCalibrationResult calibrate_multi(const LossTensor& tensor, const MultiControlSpec& spec,
                                       const SearchFunction& search);

/// Coordinate-max calibration from per-axis loss matrices without forming
/// the product tensor: axis j is calibrated against (alphas[j], bounds[j])
/// at level 1 - delta*weights[j] on its own scalar grid.
struct MultiAxisCalibrationResult {
    std::vector<double> lambda_star;                      // one value per axis
    std::vector<std::vector<std::size_t>> feasible_per_axis;
    std::vector<std::vector<double>> quantiles_per_axis;
    CalibrationMode mode;
};

MultiAxisCalibrationResult calibrate_per_axis(const std::vector<LossMatrix>& axes,
                                              const MultiControlSpec& spec,
                                              CalibrationMode mode);

/// Flags calibration sets too small for the per-loss quantile to carry
/// information: when fewer than 6 of the n losses can fall above the
/// 1 - delta/m level, the augmented quantile degenerates to the bound B.
struct Advisory {
    bool ok;
    std::string message;
};

Advisory sample_size_advisory(std::size_t n, std::size_t m, double delta);

}  // namespace losscal
