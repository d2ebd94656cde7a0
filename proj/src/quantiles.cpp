#include "losscal/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "losscal/errors.hpp"

namespace losscal {

QuantileLevel::QuantileLevel(double v) : value(v) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream msg;
        msg << "quantile level must lie in (0,1), got " << v;
        throw ConfigError(msg.str());
    }
}

LossBound::LossBound(double v) : value(v) {
    if (!std::isfinite(v)) {
        throw ConfigError("loss bound must be finite");
    }
}

double conservative_quantile(std::span<const double> values, QuantileLevel level) {
    if (values.empty()) {
        throw ConfigError("conservative_quantile: empty sample");
    }
    const auto n = values.size();
    auto k = static_cast<std::size_t>(std::ceil(level.value * static_cast<double>(n)));
    if (k < 1) k = 1;
    if (k > n) k = n;

    std::vector<double> work(values.begin(), values.end());
    std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k - 1), work.end());
    return work[k - 1];
}

double augmented_quantile(std::span<const double> losses, LossBound bound, double delta) {
    if (losses.empty()) {
        throw ConfigError("augmented_quantile: empty sample");
    }
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (losses[i] > bound.value) {
            std::ostringstream msg;
            msg << "augmented_quantile: loss at index " << i << " (" << losses[i]
                << ") violates the stated bound " << bound.value;
            throw ConfigError(msg.str());
        }
    }
    std::vector<double> work(losses.begin(), losses.end());
    work.push_back(bound.value);
    return conservative_quantile(work, QuantileLevel(1.0 - delta));
}

double full_quantile(std::span<const double> losses, double delta) {
    return conservative_quantile(losses, QuantileLevel(1.0 - delta));
}

}  // namespace losscal
