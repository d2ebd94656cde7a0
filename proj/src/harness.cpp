#include "losscal/harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "losscal/errors.hpp"
#include "losscal/fields.hpp"
#include "losscal/parallel.hpp"
#include "losscal/rng.hpp"
#include "losscal/selective.hpp"

namespace losscal {

namespace {

void check_plan(const SplitPlan& plan) {
    if (!(plan.test_frac > 0.0 && plan.test_frac < 1.0) ||
        !(plan.calib_frac_of_rest > 0.0 && plan.calib_frac_of_rest < 1.0)) {
        throw ConfigError("split fractions must lie in (0,1)");
    }
    if (plan.repeats == 0) {
        throw ConfigError("split plan needs at least one repeat");
    }
}

void check_sweep(const SweepSpec& sweep) {
    if (sweep.alphas.empty() || sweep.deltas.empty()) {
        throw ConfigError("sweep needs at least one alpha and one delta");
    }
    for (double a : sweep.alphas) {
        if (!std::isfinite(a)) throw ConfigError("sweep alphas must be finite");
    }
    for (double d : sweep.deltas) {
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("sweep deltas must lie in (0,1)");
    }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

SplitIndices split_dataset(std::size_t n, const SplitPlan& plan, std::size_t repeat) {
    check_plan(plan);
    if (repeat >= plan.repeats) {
        std::ostringstream msg;
        msg << "repeat " << repeat << " out of range for a plan of " << plan.repeats;
        throw ConfigError(msg.str());
    }
    const auto n_test = static_cast<std::size_t>(std::lround(plan.test_frac * static_cast<double>(n)));
    const std::size_t rest = n - std::min(n_test, n);
    const auto n_calib =
        static_cast<std::size_t>(std::lround(plan.calib_frac_of_rest * static_cast<double>(rest)));
    if (n_test == 0 || n_calib == 0 || rest <= n_calib) {
        std::ostringstream msg;
        msg << "dataset of " << n << " samples is too small for the split plan";
        throw ConfigError(msg.str());
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(derive_seed(plan.seed, repeat));
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(idx[i], idx[rng.index(i + 1)]);
    }

    SplitIndices out;
    out.test.assign(idx.begin(), idx.begin() + n_test);
    out.calib.assign(idx.begin() + n_test, idx.begin() + n_test + n_calib);
    out.train.assign(idx.begin() + n_test + n_calib, idx.end());
    return out;
}

namespace {

std::size_t cell_slot(const TrialReport& report, std::size_t a, std::size_t d, std::size_t r) {
    return (a * report.deltas.size() + d) * report.plan.repeats + r;
}

void summarize(TrialReport& report) {
    report.summaries.clear();
    report.summaries.reserve(report.alphas.size() * report.deltas.size());
    for (std::size_t a = 0; a < report.alphas.size(); ++a) {
        for (std::size_t d = 0; d < report.deltas.size(); ++d) {
            CellSummary s;
            s.alpha = report.alphas[a];
            s.delta = report.deltas[d];
            double lambda = 0.0, violation = 0.0, efficiency = 0.0;
            for (std::size_t r = 0; r < report.plan.repeats; ++r) {
                const CellResult& cell = report.cells[cell_slot(report, a, d, r)];
                if (!cell.feasible) continue;
                ++s.feasible_repeats;
                lambda += cell.lambda_star;
                violation += cell.violation_freq;
                efficiency += cell.efficiency;
            }
            if (s.feasible_repeats > 0) {
                const auto k = static_cast<double>(s.feasible_repeats);
                s.mean_lambda = lambda / k;
                s.mean_violation = violation / k;
                s.mean_efficiency = efficiency / k;
            }
            report.summaries.push_back(s);
        }
    }
}

}  // namespace

TrialReport run_selective_split_experiment(const RegressionDataset& data,
                                           const EnsembleConfig& model_cfg,
                                           const ParamGrid& grid, const SweepSpec& sweep,
                                           const SearchFunction& search, const SplitPlan& plan) {
    check_plan(plan);
    check_sweep(sweep);
    if (grid.dim() != 1) {
        throw ConfigError("split experiments need a scalar grid");
    }
    const std::size_t n = data.features.size();
    if (n == 0 || data.targets.size() != n) {
        throw ConfigError("regression dataset needs matching feature and target rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (data.targets[i].empty()) {
            throw ConfigError("regression dataset needs at least one target column");
        }
        const double y = data.targets[i][0];
        if (!(y >= 0.0 && y <= 1.0)) {
            std::ostringstream msg;
            msg << "target of sample " << i << " is " << y
                << "; selective experiments expect labels normalized to [0,1]";
            throw ConfigError(msg.str());
        }
    }

    TrialReport report;
    report.family = "selective";
    report.alphas = sweep.alphas;
    report.deltas = sweep.deltas;
    report.plan = plan;
    report.sample_count = n;
    report.cells.resize(sweep.alphas.size() * sweep.deltas.size() * plan.repeats);

    parallel_for(plan.repeats, [&](std::size_t r) {
        const SplitIndices split = split_dataset(n, plan, r);

        std::vector<std::vector<double>> train_x;
        std::vector<double> train_y;
        train_x.reserve(split.train.size());
        train_y.reserve(split.train.size());
        for (std::size_t i : split.train) {
            train_x.push_back(data.features[i]);
            train_y.push_back(data.targets[i][0]);
        }
        EnsembleConfig cfg = model_cfg;
        cfg.seed = derive_seed(model_cfg.seed, r);
        const TreeEnsemble model = TreeEnsemble::train(train_x, train_y, cfg);

        auto score_split = [&](const std::vector<std::size_t>& part, std::vector<double>& sq,
                               std::vector<double>& g, std::vector<double>& f,
                               std::vector<double>& y) {
            sq.reserve(part.size());
            g.reserve(part.size());
            f.reserve(part.size());
            y.reserve(part.size());
            for (std::size_t i : part) {
                const auto [mean, spread] = model.predict_mean_std(data.features[i]);
                const double fv = clamp01(mean);
                const double err = data.targets[i][0] - fv;
                sq.push_back(err * err);
                g.push_back(spread);
                f.push_back(fv);
                y.push_back(data.targets[i][0]);
            }
        };
        std::vector<double> calib_sq, calib_g, calib_f, calib_y;
        std::vector<double> test_sq, test_g, test_f, test_y;
        score_split(split.calib, calib_sq, calib_g, calib_f, calib_y);
        score_split(split.test, test_sq, test_g, test_f, test_y);

        const LossMatrix matrix =
            compute_loss_matrix(calib_sq.size(), grid, [&](std::size_t i, const GridPoint& lam) {
                return selective_loss_at(calib_sq[i], calib_g[i], lam[0]);
            });

        for (std::size_t a = 0; a < sweep.alphas.size(); ++a) {
            for (std::size_t d = 0; d < sweep.deltas.size(); ++d) {
                CellResult cell;
                cell.alpha = sweep.alphas[a];
                cell.delta = sweep.deltas[d];
                cell.repeat = r;
                try {
                    const ControlSpec spec(cell.alpha, cell.delta, sweep.bound);
                    const CalibrationResult res = calibrate(matrix, spec, search);
                    cell.feasible = true;
                    cell.lambda_star = res.lambda_star[0];
                    cell.feasible_size = res.feasible.size();
                    std::vector<SelectiveOutput> outputs;
                    outputs.reserve(test_y.size());
                    std::size_t violated = 0;
                    for (std::size_t t = 0; t < test_y.size(); ++t) {
                        outputs.push_back(test_g[t] <= cell.lambda_star
                                              ? SelectiveOutput::predict(test_f[t])
                                              : SelectiveOutput::abstain());
                        if (selective_loss(test_y[t], outputs.back()) > cell.alpha) ++violated;
                    }
                    cell.violation_freq =
                        static_cast<double>(violated) / static_cast<double>(test_y.size());
                    cell.efficiency = miscoverage(outputs);
                } catch (const InfeasibleError&) {
                    cell.feasible = false;
                }
                report.cells[cell_slot(report, a, d, r)] = cell;
            }
        }
    });

    summarize(report);
    return report;
}

FieldSweep make_field_sweep(const Field& probs, const GridPredictionSet& label) {
    if (probs.rows != label.rows || probs.cols != label.cols) {
        throw ConfigError("field and label dimensions differ");
    }
    FieldSweep sweep;
    sweep.cells = probs.values.size();
    sweep.sorted_probs = probs.values;
    std::sort(sweep.sorted_probs.begin(), sweep.sorted_probs.end());
    sweep.label_probs.reserve(label.count());
    for (std::size_t c = 0; c < sweep.cells; ++c) {
        if (label.member[c] != 0) sweep.label_probs.push_back(probs.values[c]);
    }
    std::sort(sweep.label_probs.begin(), sweep.label_probs.end());
    return sweep;
}

double field_sweep_fd_loss(const FieldSweep& sweep, double lambda) {
    const auto selected = static_cast<std::size_t>(
        sweep.sorted_probs.end() -
        std::lower_bound(sweep.sorted_probs.begin(), sweep.sorted_probs.end(), lambda));
    if (selected == 0) return 0.0;
    const auto hits = static_cast<std::size_t>(
        sweep.label_probs.end() -
        std::lower_bound(sweep.label_probs.begin(), sweep.label_probs.end(), lambda));
    return 1.0 - static_cast<double>(hits) / static_cast<double>(selected);
}

double field_sweep_size(const FieldSweep& sweep, double lambda) {
    const auto selected = static_cast<std::size_t>(
        sweep.sorted_probs.end() -
        std::lower_bound(sweep.sorted_probs.begin(), sweep.sorted_probs.end(), lambda));
    return static_cast<double>(selected) / static_cast<double>(sweep.cells);
}

TrialReport run_segmentation_split_experiment(const FieldDataset& data, const ParamGrid& grid,
                                              const SweepSpec& sweep,
                                              const SearchFunction& search,
                                              const SplitPlan& plan) {
    check_plan(plan);
    check_sweep(sweep);
    if (grid.dim() != 1) {
        throw ConfigError("split experiments need a scalar grid");
    }
    const std::size_t n = data.forecasts.size();
    if (n == 0 || data.labels.size() != n) {
        throw ConfigError("field dataset needs matching forecast and label counts");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (data.forecasts[i].rows != data.rows || data.forecasts[i].cols != data.cols ||
            data.labels[i].rows != data.rows || data.labels[i].cols != data.cols) {
            std::ostringstream msg;
            msg << "sample " << i << " does not match the dataset's field dimensions";
            throw ConfigError(msg.str());
        }
    }

    TrialReport report;
    report.family = "segmentation";
    report.alphas = sweep.alphas;
    report.deltas = sweep.deltas;
    report.plan = plan;
    report.sample_count = n;
    report.cells.resize(sweep.alphas.size() * sweep.deltas.size() * plan.repeats);

    parallel_for(plan.repeats, [&](std::size_t r) {
        const SplitIndices split = split_dataset(n, plan, r);

        std::vector<FieldSweep> calib, test;
        calib.reserve(split.calib.size());
        test.reserve(split.test.size());
        for (std::size_t i : split.calib) {
            calib.push_back(make_field_sweep(data.forecasts[i], data.labels[i]));
        }
        for (std::size_t i : split.test) {
            test.push_back(make_field_sweep(data.forecasts[i], data.labels[i]));
        }

        const LossMatrix matrix =
            compute_loss_matrix(calib.size(), grid, [&](std::size_t i, const GridPoint& lam) {
                return field_sweep_fd_loss(calib[i], lam[0]);
            });

        for (std::size_t a = 0; a < sweep.alphas.size(); ++a) {
            for (std::size_t d = 0; d < sweep.deltas.size(); ++d) {
                CellResult cell;
                cell.alpha = sweep.alphas[a];
                cell.delta = sweep.deltas[d];
                cell.repeat = r;
                try {
                    const ControlSpec spec(cell.alpha, cell.delta, sweep.bound);
                    const CalibrationResult res = calibrate(matrix, spec, search);
                    cell.feasible = true;
                    cell.lambda_star = res.lambda_star[0];
                    cell.feasible_size = res.feasible.size();
                    std::size_t violated = 0;
                    double size_total = 0.0;
                    for (const FieldSweep& fs : test) {
                        if (field_sweep_fd_loss(fs, cell.lambda_star) > cell.alpha) ++violated;
                        size_total += field_sweep_size(fs, cell.lambda_star);
                    }
                    cell.violation_freq =
                        static_cast<double>(violated) / static_cast<double>(test.size());
                    cell.efficiency = size_total / static_cast<double>(test.size());
                } catch (const InfeasibleError&) {
                    cell.feasible = false;
                }
                report.cells[cell_slot(report, a, d, r)] = cell;
            }
        }
    });

    summarize(report);
    return report;
}

namespace {

struct TrialOutcome {
    std::uint8_t selected_feasible = 0;
    std::uint8_t selected_violation = 0;
    std::uint8_t inclusion_violation = 0;
    std::uint8_t both_feasible = 0;
    std::uint8_t agree = 0;
};

[[noreturn]] void rethrow_trial(std::size_t trial, const std::exception& e) {
    std::ostringstream msg;
    msg << "monte carlo trial " << trial << ": " << e.what();
    throw std::runtime_error(msg.str());
}

LossMatrix drop_last_row(const LossMatrix& full) {
    const std::size_t cols = full.grid().size();
    const std::size_t cal_rows = full.sample_count() - 1;
    std::vector<double> head(full.values().begin(),
                             full.values().begin() + static_cast<std::ptrdiff_t>(cal_rows * cols));
    return LossMatrix(std::move(head), cal_rows, full.grid());
}

}  // namespace

McEstimate monte_carlo_guarantee(const RowMatrixGenerator& generator, CalibrationMode mode,
                                 const ControlSpec& spec, const SearchFunction& search,
                                 std::size_t trials, std::uint64_t seed) {
    if (!generator) {
        throw ConfigError("monte carlo needs a trial generator");
    }
    if (trials < 100) {
        throw ConfigError("monte carlo estimates need at least 100 trials");
    }

    std::vector<TrialOutcome> outcomes(trials);
    parallel_for(trials, [&](std::size_t t) {
        LossMatrix full = [&] {
            try {
                return generator(derive_seed(seed, t));
            } catch (const std::exception& e) {
                rethrow_trial(t, e);
            }
        }();
        if (full.sample_count() < 2) {
            std::ostringstream msg;
            msg << "monte carlo trial " << t
                << ": generator must supply calibration rows plus a test row";
            throw std::runtime_error(msg.str());
        }
        const std::size_t test_row = full.sample_count() - 1;
        const LossMatrix calib_only = drop_last_row(full);

        const std::vector<std::size_t> ideal_fs = feasible_set_ideal(full, spec);
        const std::vector<std::size_t> practical_fs = feasible_set(calib_only, spec);

        TrialOutcome& out = outcomes[t];
        out.inclusion_violation = std::includes(ideal_fs.begin(), ideal_fs.end(),
                                                practical_fs.begin(), practical_fs.end())
                                      ? 0
                                      : 1;
        const bool ideal_ok = !ideal_fs.empty();
        const bool practical_ok = !practical_fs.empty();
        std::size_t ideal_idx = 0, practical_idx = 0;
        if (ideal_ok) ideal_idx = search.select(full.grid(), ideal_fs);
        if (practical_ok) practical_idx = search.select(full.grid(), practical_fs);
        if (ideal_ok && practical_ok) {
            out.both_feasible = 1;
            out.agree = ideal_idx == practical_idx ? 1 : 0;
        }
        const bool selected_ok = mode == CalibrationMode::Ideal ? ideal_ok : practical_ok;
        out.selected_feasible = selected_ok ? 1 : 0;
        if (selected_ok) {
            const std::size_t idx = mode == CalibrationMode::Ideal ? ideal_idx : practical_idx;
            out.selected_violation = full.at(test_row, idx) > spec.alpha ? 1 : 0;
        }
    });

    McEstimate est;
    est.trials = trials;
    est.mode = mode;
    est.alpha = spec.alpha;
    est.delta = spec.delta;
    for (const TrialOutcome& out : outcomes) {
        if (out.selected_feasible) {
            ++est.feasible_trials;
            est.violations += out.selected_violation;
        } else {
            ++est.infeasible_trials;
        }
        est.inclusion_violations += out.inclusion_violation;
        est.both_feasible += out.both_feasible;
        est.lambda_agreements += out.agree;
    }
    if (est.feasible_trials > 0) {
        est.violation_rate =
            static_cast<double>(est.violations) / static_cast<double>(est.feasible_trials);
    }
    if (est.both_feasible > 0) {
        est.agreement_rate =
            static_cast<double>(est.lambda_agreements) / static_cast<double>(est.both_feasible);
    }
    est.tolerance = 3.0 * std::sqrt(spec.delta * (1.0 - spec.delta) / static_cast<double>(trials));
    return est;
}

McMultiEstimate monte_carlo_guarantee_multi(const AxisMatrixGenerator& generator,
                                            CalibrationMode mode, const MultiControlSpec& spec,
                                            std::size_t trials, std::uint64_t seed) {
    if (!generator) {
        throw ConfigError("monte carlo needs a trial generator");
    }
    if (trials < 100) {
        throw ConfigError("monte carlo estimates need at least 100 trials");
    }

    struct MultiOutcome {
        std::uint8_t feasible = 0;
        std::uint8_t violation = 0;
    };
    std::vector<MultiOutcome> outcomes(trials);
    parallel_for(trials, [&](std::size_t t) {
        std::vector<LossMatrix> full = [&] {
            try {
                return generator(derive_seed(seed, t));
            } catch (const std::exception& e) {
                rethrow_trial(t, e);
            }
        }();
        if (full.size() != spec.loss_count()) {
            std::ostringstream msg;
            msg << "monte carlo trial " << t << ": generator produced " << full.size()
                << " axes for a spec of " << spec.loss_count() << " losses";
            throw std::runtime_error(msg.str());
        }
        const std::size_t rows = full.front().sample_count();
        for (const LossMatrix& axis : full) {
            if (axis.sample_count() != rows || rows < 2) {
                std::ostringstream msg;
                msg << "monte carlo trial " << t
                    << ": every axis needs the same calibration rows plus a test row";
                throw std::runtime_error(msg.str());
            }
        }
        const std::size_t test_row = rows - 1;

        MultiOutcome& out = outcomes[t];
        try {
            MultiAxisCalibrationResult res;
            if (mode == CalibrationMode::Ideal) {
                res = calibrate_per_axis(full, spec, CalibrationMode::Ideal);
            } else {
                std::vector<LossMatrix> heads;
                heads.reserve(full.size());
                for (const LossMatrix& axis : full) heads.push_back(drop_last_row(axis));
                res = calibrate_per_axis(heads, spec, CalibrationMode::Practical);
            }
            out.feasible = 1;
            for (std::size_t j = 0; j < full.size(); ++j) {
                const std::size_t idx = res.feasible_per_axis[j].back();
                if (full[j].at(test_row, idx) > spec.alphas[j]) {
                    out.violation = 1;
                    break;
                }
            }
        } catch (const InfeasibleError&) {
            out.feasible = 0;
        }
    });

    McMultiEstimate est;
    est.trials = trials;
    est.mode = mode;
    est.delta = spec.delta;
    for (const MultiOutcome& out : outcomes) {
        if (out.feasible) {
            ++est.feasible_trials;
            est.violations += out.violation;
        } else {
            ++est.infeasible_trials;
        }
    }
    if (est.feasible_trials > 0) {
        est.violation_rate =
            static_cast<double>(est.violations) / static_cast<double>(est.feasible_trials);
    }
    est.tolerance = 3.0 * std::sqrt(spec.delta * (1.0 - spec.delta) / static_cast<double>(trials));
    return est;
}

RowMatrixGenerator selective_trial_generator(const ParamGrid& grid, std::size_t rows,
                                             const SyntheticRegressionConfig& data_cfg,
                                             const EnsembleConfig& model_cfg) {
    if (grid.dim() != 1) {
        throw ConfigError("selective trials need a scalar grid");
    }
    if (rows < 11) {
        throw ConfigError("selective trials need at least 11 rows (10 calibration plus the test)");
    }
    const RegressionDataset train_data = generate_regression(data_cfg);
    std::vector<double> train_y;
    train_y.reserve(train_data.targets.size());
    for (const auto& row : train_data.targets) train_y.push_back(row[0]);
    auto model = std::make_shared<const TreeEnsemble>(
        TreeEnsemble::train(train_data.features, train_y, model_cfg));

    SyntheticRegressionConfig trial_cfg = data_cfg;
    trial_cfg.n = rows;
    return [grid, rows, trial_cfg, model](std::uint64_t trial_seed) {
        SyntheticRegressionConfig cfg = trial_cfg;
        cfg.seed = trial_seed;
        const RegressionDataset data = generate_regression(cfg);
        std::vector<double> values(rows * grid.size());
        for (std::size_t i = 0; i < rows; ++i) {
            const auto [mean, spread] = model->predict_mean_std(data.features[i]);
            const double err = data.targets[i][0] - clamp01(mean);
            const double sq = err * err;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                values[i * grid.size() + k] = selective_loss_at(sq, spread, grid[k][0]);
            }
        }
        return LossMatrix(std::move(values), rows, grid);
    };
}

RowMatrixGenerator segmentation_trial_generator(const ParamGrid& grid, std::size_t rows,
                                                const SyntheticFieldConfig& field_cfg) {
    if (grid.dim() != 1) {
        throw ConfigError("segmentation trials need a scalar grid");
    }
    if (rows < 2) {
        throw ConfigError("segmentation trials need calibration rows plus the test row");
    }
    SyntheticFieldConfig trial_cfg = field_cfg;
    trial_cfg.n = rows;
    return [grid, rows, trial_cfg](std::uint64_t trial_seed) {
        SyntheticFieldConfig cfg = trial_cfg;
        cfg.seed = trial_seed;
        const FieldDataset data = generate_fields(cfg);
        std::vector<double> values(rows * grid.size());
        for (std::size_t i = 0; i < rows; ++i) {
            const FieldSweep sweep = make_field_sweep(data.forecasts[i], data.labels[i]);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                values[i * grid.size() + k] = field_sweep_fd_loss(sweep, grid[k][0]);
            }
        }
        return LossMatrix(std::move(values), rows, grid);
    };
}

AxisMatrixGenerator multi_selective_trial_generator(const ParamGrid& axis_grid, std::size_t rows,
                                                    const SyntheticRegressionConfig& data_cfg,
                                                    const EnsembleConfig& model_cfg) {
    if (axis_grid.dim() != 1) {
        throw ConfigError("per-axis trials need a scalar grid");
    }
    if (rows < 11) {
        throw ConfigError("selective trials need at least 11 rows (10 calibration plus the test)");
    }
    const RegressionDataset train_data = generate_regression(data_cfg);
    const std::size_t m = data_cfg.targets;
    auto models = std::make_shared<std::vector<TreeEnsemble>>();
    models->reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> train_y;
        train_y.reserve(train_data.targets.size());
        for (const auto& row : train_data.targets) train_y.push_back(row[j]);
        EnsembleConfig cfg = model_cfg;
        cfg.seed = derive_seed(model_cfg.seed, j);
        models->push_back(TreeEnsemble::train(train_data.features, train_y, cfg));
    }

    SyntheticRegressionConfig trial_cfg = data_cfg;
    trial_cfg.n = rows;
    return [axis_grid, rows, m, trial_cfg, models](std::uint64_t trial_seed) {
        SyntheticRegressionConfig cfg = trial_cfg;
        cfg.seed = trial_seed;
        const RegressionDataset data = generate_regression(cfg);
        std::vector<LossMatrix> axes;
        axes.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> values(rows * axis_grid.size());
            for (std::size_t i = 0; i < rows; ++i) {
                const auto [mean, spread] = (*models)[j].predict_mean_std(data.features[i]);
                const double err = data.targets[i][j] - clamp01(mean);
                const double sq = err * err;
                for (std::size_t k = 0; k < axis_grid.size(); ++k) {
                    values[i * axis_grid.size() + k] =
                        selective_loss_at(sq, spread, axis_grid[k][0]);
                }
            }
            axes.emplace_back(std::move(values), rows, axis_grid);
        }
        return axes;
    };
}

}  // namespace losscal
