#include "losscal/conformal.hpp"

#include <cmath>
#include <sstream>

#include "losscal/errors.hpp"

namespace losscal {

NonconformityScores::NonconformityScores(std::vector<double> s) : scores(std::move(s)) {
    if (scores.empty()) {
        throw ConfigError("nonconformity scores must be nonempty");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            std::ostringstream msg;
            msg << "nonconformity score at index " << i << " is not finite";
            throw ConfigError(msg.str());
        }
    }
}

IcpThreshold icp_calibrate(const NonconformityScores& scores, double delta) {
    std::vector<double> augmented = scores.scores;
    augmented.push_back(kInfinitySentinel);
    return IcpThreshold{conservative_quantile(augmented, QuantileLevel(1.0 - delta)), delta};
}

GridPoint clcp_calibrate(const LossMatrix& matrix, const ControlSpec& spec) {
    if (matrix.grid().dim() != 1) {
        throw ConfigError("CLCP requires a scalar parameter grid");
    }
    for (std::size_t i = 0; i < matrix.sample_count(); ++i) {
        const auto row = matrix.row(i);
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k] > row[k - 1]) {
                std::ostringstream msg;
                msg << "inputs violate CLCP nesting assumptions: sample " << i
                    << " has increasing loss between grid points " << k - 1 << " and " << k;
                throw ConfigError(msg.str());
            }
        }
    }
    for (std::size_t k = 0; k < matrix.grid().size(); ++k) {
        const auto col = matrix.column(k);
        if (augmented_quantile(col, spec.bound, spec.delta) <= spec.alpha) {
            return matrix.grid()[k];
        }
    }
    std::ostringstream msg;
    msg << "no feasible lambda: loss level alpha=" << spec.alpha
        << " unreachable at confidence 1-delta=" << 1.0 - spec.delta;
    throw InfeasibleError(msg.str());
}

}  // namespace losscal
