#pragma once

#include <vector>

#include "losscal/calibration.hpp"
#include "losscal/grid.hpp"
#include "losscal/loss_matrix.hpp"
#include "losscal/quantiles.hpp"

namespace losscal {

/// Nonconformity values A_i = A(X_i, Y_i) on the calibration set.
struct NonconformityScores {
    std::vector<double> scores;

    explicit NonconformityScores(std::vector<double> s);
};

/// Conservative 1-delta quantile of the scores augmented with an infinite
/// sentinel. q may be the sentinel itself (then prediction sets are the whole
/// label space); it is compared against, never used in arithmetic.
struct IcpThreshold {
    double q;
    double delta;
};

IcpThreshold icp_calibrate(const NonconformityScores& scores, double delta);

/// Labels whose nonconformity at x stays within the threshold, in the order
/// the candidate labels were given.
template <typename Object, typename Label, typename ScoreFn>
std::vector<Label> icp_predict_set(ScoreFn&& score_fn, const Object& x,
                                   const std::vector<Label>& labels, const IcpThreshold& thr) {
    std::vector<Label> out;
    for (const Label& y : labels) {
        if (score_fn(x, y) <= thr.q) out.push_back(y);
    }
    return out;
}

/// Conformal loss-controlling prediction: the smallest grid point whose
/// bound-augmented loss quantile is <= alpha. Requires a scalar grid and
/// rows that are nonincreasing along it; scans from the smallest candidate
/// and stops at the first hit.
GridPoint clcp_calibrate(const LossMatrix& matrix, const ControlSpec& spec);

}  // namespace losscal
