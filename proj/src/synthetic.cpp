#include "losscal/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "losscal/errors.hpp"
#include "losscal/rng.hpp"

namespace losscal {

namespace {

double latent(std::size_t target, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        s += std::sin(3.0 * static_cast<double>(target + 1) * static_cast<double>(k + 1) *
                      x[k]);
    }
    return s / static_cast<double>(x.size());
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

RegressionDataset generate_regression(const SyntheticRegressionConfig& cfg) {
    if (cfg.n < 10) {
        std::ostringstream msg;
        msg << "regression generator needs n >= 10, got " << cfg.n;
        throw ConfigError(msg.str());
    }
    if (cfg.dim == 0 || cfg.targets == 0) {
        throw ConfigError("regression generator needs dim >= 1 and targets >= 1");
    }
    if (!(cfg.noise_scale >= 0.0) || !std::isfinite(cfg.noise_scale)) {
        throw ConfigError("noise_scale must be finite and nonnegative");
    }

    Rng rng(cfg.seed);
    RegressionDataset data;
    data.features.assign(cfg.n, std::vector<double>(cfg.dim));
    data.targets.assign(cfg.n, std::vector<double>(cfg.targets));

    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (auto& v : data.features[i]) v = rng.uniform();
        for (std::size_t j = 0; j < cfg.targets; ++j) {
            const double spread =
                cfg.noise == NoiseModel::Heteroscedastic
                    ? 0.25 + 1.5 * std::abs(data.features[i][0] - 0.5)
                    : 1.0;
            data.targets[i][j] =
                latent(j, data.features[i]) + cfg.noise_scale * spread * rng.normal();
        }
    }

    for (std::size_t j = 0; j < cfg.targets; ++j) {
        double lo = data.targets[0][j], hi = lo;
        for (std::size_t i = 1; i < cfg.n; ++i) {
            lo = std::min(lo, data.targets[i][j]);
            hi = std::max(hi, data.targets[i][j]);
        }
        if (hi <= lo) {
            std::ostringstream msg;
            msg << "target " << j << " is constant; min-max normalization undefined";
            throw ConfigError(msg.str());
        }
        for (std::size_t i = 0; i < cfg.n; ++i) {
            data.targets[i][j] = (data.targets[i][j] - lo) / (hi - lo);
        }
    }
    return data;
}

FieldDataset generate_fields(const SyntheticFieldConfig& cfg) {
    if (cfg.rows < 2 || cfg.cols < 2) {
        throw ConfigError("field generator needs rows, cols >= 2");
    }
    if (!(cfg.event_rate >= 0.0 && cfg.event_rate < 1.0)) {
        std::ostringstream msg;
        msg << "event_rate must lie in [0,1), got " << cfg.event_rate;
        throw ConfigError(msg.str());
    }
    if (!(cfg.sharpness > 0.0) || !std::isfinite(cfg.sharpness)) {
        throw ConfigError("sharpness must be finite and positive");
    }
    if (cfg.n == 0) {
        throw ConfigError("field generator needs n >= 1");
    }

    const std::size_t bumps = cfg.event_rate > 0.0 ? 2 : 0;
    const double cells = static_cast<double>(cfg.rows * cfg.cols);
    // Size bumps so the half-max disc of each covers about its share of the
    // target event area: pi*2*ln2*sigma^2 per bump.
    const double sigma =
        bumps == 0
            ? 1.0
            : std::max(0.8, std::sqrt(cfg.event_rate * cells /
                                      (static_cast<double>(bumps) * 4.355)));

    Rng rng(cfg.seed);
    FieldDataset data;
    data.rows = cfg.rows;
    data.cols = cfg.cols;
    data.forecasts.reserve(cfg.n);
    data.labels.reserve(cfg.n);

    for (std::size_t s = 0; s < cfg.n; ++s) {
        std::vector<std::pair<double, double>> centers(bumps);
        for (auto& c : centers) {
            c.first = rng.uniform() * static_cast<double>(cfg.rows);
            c.second = rng.uniform() * static_cast<double>(cfg.cols);
        }

        std::vector<double> truth(cfg.rows * cfg.cols, 0.0);
        for (std::size_t p = 0; p < cfg.rows; ++p) {
            for (std::size_t q = 0; q < cfg.cols; ++q) {
                double prob = 0.0;
                for (const auto& c : centers) {
                    const double dp = static_cast<double>(p) + 0.5 - c.first;
                    const double dq = static_cast<double>(q) + 0.5 - c.second;
                    prob += std::exp(-(dp * dp + dq * dq) / (2.0 * sigma * sigma));
                }
                truth[p * cfg.cols + q] = std::min(prob, 1.0);
            }
        }

        std::vector<std::uint8_t> label(truth.size());
        for (std::size_t idx = 0; idx < truth.size(); ++idx) {
            label[idx] = rng.bernoulli(truth[idx]) ? 1 : 0;
        }

        std::vector<double> forecast(truth.size());
        for (std::size_t idx = 0; idx < truth.size(); ++idx) {
            const double p_clip = std::clamp(truth[idx], 1e-6, 1.0 - 1e-6);
            const double warped = sigmoid(cfg.sharpness * logit(p_clip));
            forecast[idx] = std::clamp(warped + 0.03 * rng.normal(), 0.0, 1.0);
        }

        data.labels.emplace_back(cfg.rows, cfg.cols, std::move(label));
        data.forecasts.emplace_back(cfg.rows, cfg.cols, std::move(forecast));
    }
    return data;
}

}  // namespace losscal
