#pragma once

#include <limits>
#include <span>
#include <vector>

namespace losscal {

/// A confidence level 1-delta (or 1-delta/m); must lie strictly in (0,1).
struct QuantileLevel {
    double value;

    explicit QuantileLevel(double v);
};

/// Finite upper bound B on a loss. Operations that receive a bound verify
/// every loss they see is <= value and fail loudly otherwise.
struct LossBound {
    double value;

    explicit LossBound(double v);
};

/// Sentinel standing for "+infinity" in augmented score multisets. It is only
/// ever ordered against finite values, never used in arithmetic.
inline constexpr double kInfinitySentinel = std::numeric_limits<double>::infinity();

/// Conservative empirical quantile: the k-th smallest element of `values`
/// with k = ceil(level * N), duplicates counted with multiplicity. This is
/// the order-statistic convention that keeps finite-sample coverage
/// inequalities valid; no interpolation is ever applied.
double conservative_quantile(std::span<const double> values, QuantileLevel level);

/// Conservative 1-delta quantile of {losses} augmented with the bound B.
/// Every loss must be <= bound.value. Monotone nondecreasing in each loss
/// and nonincreasing in delta.
double augmented_quantile(std::span<const double> losses, LossBound bound, double delta);

/// Conservative 1-delta quantile of the losses as given, with no
/// augmentation. Used when the full set of n+1 losses is available.
double full_quantile(std::span<const double> losses, double delta);

}  // namespace losscal
