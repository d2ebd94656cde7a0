#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace losscal {

/// Either a point prediction or an abstention.
struct SelectiveOutput {
    std::optional<double> value;

    bool predicted() const { return value.has_value(); }
    static SelectiveOutput abstain() { return {std::nullopt}; }
    static SelectiveOutput predict(double v) { return {v}; }
};

/// Point predictor f with an uncertainty score g; predicts when the score
/// stays at or below the threshold, abstains otherwise.
struct SelectivePredictor {
    std::function<double(const std::vector<double>&)> mean_fn;
    std::function<double(const std::vector<double>&)> selector_fn;
    double threshold;
};

SelectiveOutput selective_predict(const SelectivePredictor& pred, const std::vector<double>& x);

/// Squared error when predicting, zero on abstention.
double selective_loss(double y, const SelectiveOutput& out);

/// The same loss as a function of the threshold, from per-sample
/// precomputations: sq_err * 1[score <= lambda]. Nondecreasing in lambda.
double selective_loss_at(double sq_err, double score, double lambda);

/// Fraction of abstentions; the test-set estimate of 1 - E[selection rate].
double miscoverage(const std::vector<SelectiveOutput>& outputs);

/// Independent per-target selective predictors sharing an input.
struct MultiSelectivePredictor {
    std::vector<SelectivePredictor> targets;
};

std::vector<SelectiveOutput> multi_selective_predict(const MultiSelectivePredictor& pred,
                                                     const std::vector<double>& x);

/// Componentwise selective losses; sizes must agree.
std::vector<double> multi_selective_loss(const std::vector<double>& y,
                                         const std::vector<SelectiveOutput>& outputs);

/// Largest per-target loss, the summary the harness reports for the
/// multi-target family.
double max_loss(const std::vector<double>& losses);

}  // namespace losscal
