#pragma once

#include <cstdint>
#include <vector>

#include "losscal/fields.hpp"

namespace losscal {

enum class NoiseModel { Homoscedastic, Heteroscedastic };

/// Smooth nonlinear regression data with optional input-dependent noise.
/// Labels are min-max normalized to [0,1] per target, so 1 bounds every
/// squared-error loss and the heteroscedastic spread gives an ensemble's
/// uncertainty score something real to track.
struct SyntheticRegressionConfig {
    std::size_t n = 1000;
    std::size_t dim = 4;
    NoiseModel noise = NoiseModel::Homoscedastic;
    double noise_scale = 0.1;
    std::size_t targets = 1;
    std::uint64_t seed = 0;
};

struct RegressionDataset {
    std::vector<std::vector<double>> features;  // n x dim
    std::vector<std::vector<double>> targets;   // n x m, each column in [0,1]
};

RegressionDataset generate_regression(const SyntheticRegressionConfig& cfg);

/// Spatial event fields: each sample is a probability field built from a few
/// Gaussian bumps, a Bernoulli label field drawn from it, and a forecast
/// field that distorts the truth through a logit temperature (sharpness) and
/// additive noise. event_rate 0 is allowed and produces empty label fields.
struct SyntheticFieldConfig {
    std::size_t rows = 27;
    std::size_t cols = 27;
    double event_rate = 0.1;  // in [0,1)
    double sharpness = 1.0;   // 1 = roughly calibrated forecasts
    std::size_t n = 500;
    std::uint64_t seed = 0;
};

struct FieldDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Field> forecasts;
    std::vector<GridPredictionSet> labels;
};

FieldDataset generate_fields(const SyntheticFieldConfig& cfg);

}  // namespace losscal
