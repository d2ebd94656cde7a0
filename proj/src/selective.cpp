#include "losscal/selective.hpp"

#include <sstream>

#include "losscal/errors.hpp"

namespace losscal {

SelectiveOutput selective_predict(const SelectivePredictor& pred, const std::vector<double>& x) {
    if (pred.selector_fn(x) <= pred.threshold) {
        return SelectiveOutput::predict(pred.mean_fn(x));
    }
    return SelectiveOutput::abstain();
}

double selective_loss(double y, const SelectiveOutput& out) {
    if (!out.predicted()) return 0.0;
    const double e = y - *out.value;
    return e * e;
}

double selective_loss_at(double sq_err, double score, double lambda) {
    return score <= lambda ? sq_err : 0.0;
}

double miscoverage(const std::vector<SelectiveOutput>& outputs) {
    if (outputs.empty()) {
        throw ConfigError("miscoverage of an empty output list");
    }
    std::size_t abstained = 0;
    for (const auto& out : outputs) {
        if (!out.predicted()) ++abstained;
    }
    return static_cast<double>(abstained) / static_cast<double>(outputs.size());
}

std::vector<SelectiveOutput> multi_selective_predict(const MultiSelectivePredictor& pred,
                                                     const std::vector<double>& x) {
    std::vector<SelectiveOutput> outputs;
    outputs.reserve(pred.targets.size());
    for (const auto& target : pred.targets) {
        outputs.push_back(selective_predict(target, x));
    }
    return outputs;
}

std::vector<double> multi_selective_loss(const std::vector<double>& y,
                                         const std::vector<SelectiveOutput>& outputs) {
    if (y.size() != outputs.size()) {
        std::ostringstream msg;
        msg << "label dimension " << y.size() << " does not match " << outputs.size()
            << " outputs";
        throw ConfigError(msg.str());
    }
    std::vector<double> losses(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        losses[j] = selective_loss(y[j], outputs[j]);
    }
    return losses;
}

double max_loss(const std::vector<double>& losses) {
    if (losses.empty()) {
        throw ConfigError("max over an empty loss list");
    }
    double best = losses.front();
    for (double l : losses) {
        if (l > best) best = l;
    }
    return best;
}

}  // namespace losscal
