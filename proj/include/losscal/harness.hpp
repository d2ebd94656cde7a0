#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "losscal/calibration.hpp"
#include "losscal/ensemble.hpp"
#include "losscal/grid.hpp"
#include "losscal/loss_matrix.hpp"
#include "losscal/multi_control.hpp"
#include "losscal/synthetic.hpp"

namespace losscal {

/// Three-way data split: test_frac of the samples held out for testing,
/// calib_frac_of_rest of the remainder for calibration, the rest for
/// training. The shuffle for repeat r depends only on (seed, r), so any
/// single repeat can be reproduced in isolation.
struct SplitPlan {
    double test_frac = 0.2;
    double calib_frac_of_rest = 0.2;
    std::uint64_t seed = 0;
    std::size_t repeats = 10;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> calib;
    std::vector<std::size_t> test;
};

SplitIndices split_dataset(std::size_t n, const SplitPlan& plan, std::size_t repeat);

/// One (alpha, delta, repeat) cell of a split experiment. lambda_star,
/// feasible_size, violation_freq and efficiency are meaningful only when
/// the cell is feasible.
struct CellResult {
    double alpha = 0.0;
    double delta = 0.0;
    std::size_t repeat = 0;
    bool feasible = false;
    double lambda_star = 0.0;
    std::size_t feasible_size = 0;
    double violation_freq = 0.0;  // test fraction with loss > alpha
    double efficiency = 0.0;      // miscoverage, or mean normalized size
};

/// Means over the feasible repeats of one (alpha, delta) pair.
struct CellSummary {
    double alpha = 0.0;
    double delta = 0.0;
    std::size_t feasible_repeats = 0;
    double mean_lambda = 0.0;
    double mean_violation = 0.0;
    double mean_efficiency = 0.0;
};

struct TrialReport {
    std::string family;              // "selective" or "segmentation"
    std::vector<double> alphas;
    std::vector<double> deltas;
    SplitPlan plan;
    std::size_t sample_count = 0;
    std::vector<CellResult> cells;   // ordered by (alpha, delta, repeat)
    std::vector<CellSummary> summaries;  // ordered by (alpha, delta)
};

/// The (alpha, delta) sweep both split experiments iterate over. The bound
/// applies to every cell; with normalized labels the losses stay in [0,1],
/// so 1 is the natural choice.
struct SweepSpec {
    std::vector<double> alphas;
    std::vector<double> deltas;
    LossBound bound{1.0};
};

/// Per repeat: split, fit a forest on the train part, precompute squared
/// errors and uncertainty scores, build one calibration loss matrix, then
/// calibrate and score every (alpha, delta) cell on the test part.
/// Infeasible cells are recorded with feasible=false, not raised. Uses
/// target column 0; targets must already be normalized to [0,1].
TrialReport run_selective_split_experiment(const RegressionDataset& data,
                                           const EnsembleConfig& model_cfg,
                                           const ParamGrid& grid, const SweepSpec& sweep,
                                           const SearchFunction& search, const SplitPlan& plan);

/// Same loop for probability fields under the false-discovery loss. There
/// is nothing to fit, so the train part of each split sits idle; the calib
/// part feeds the loss matrix and the test part the violation and size
/// columns.
TrialReport run_segmentation_split_experiment(const FieldDataset& data, const ParamGrid& grid,
                                              const SweepSpec& sweep,
                                              const SearchFunction& search,
                                              const SplitPlan& plan);

/// Threshold-sweep view of one field: with the cell probabilities sorted,
/// |F(lambda)| and |y ∩ F(lambda)| come out of binary searches instead of
/// full rescans.
struct FieldSweep {
    std::vector<double> sorted_probs;  // every cell, ascending
    std::vector<double> label_probs;   // cells with y=1, ascending
    std::size_t cells = 0;
};

FieldSweep make_field_sweep(const Field& probs, const GridPredictionSet& label);
double field_sweep_fd_loss(const FieldSweep& sweep, double lambda);
double field_sweep_size(const FieldSweep& sweep, double lambda);

/// Builds the loss matrix of one Monte Carlo trial: calibration rows plus
/// the test sample as the final row, all over one shared grid.
using RowMatrixGenerator = std::function<LossMatrix(std::uint64_t trial_seed)>;

struct McEstimate {
    std::size_t trials = 0;
    std::size_t feasible_trials = 0;
    std::size_t infeasible_trials = 0;
    std::size_t violations = 0;
    double violation_rate = 0.0;  // violations / feasible_trials
    double tolerance = 0.0;       // 3 sqrt(delta (1-delta) / trials)
    // Cross-mode diagnostics, tracked on every run regardless of mode.
    std::size_t inclusion_violations = 0;  // practical feasible set not inside ideal's
    std::size_t both_feasible = 0;
    std::size_t lambda_agreements = 0;
    double agreement_rate = 0.0;  // lambda_agreements / both_feasible
    CalibrationMode mode = CalibrationMode::Ideal;
    double alpha = 0.0;
    double delta = 0.0;
};

/// Estimates P(test-row loss at lambda* > alpha) over independent trials.
/// `mode` picks whose lambda* is scored; both calibrations run in every
/// trial to fill the inclusion and agreement columns. Trials run in
/// parallel on seeds derived per trial; the reduction order is fixed.
McEstimate monte_carlo_guarantee(const RowMatrixGenerator& generator, CalibrationMode mode,
                                 const ControlSpec& spec, const SearchFunction& search,
                                 std::size_t trials, std::uint64_t seed);

/// Multi-loss variant: one scalar-grid loss matrix per controlled loss,
/// each with the test sample as its final row. A trial violates when any
/// loss exceeds its alpha at the per-axis lambda*.
using AxisMatrixGenerator = std::function<std::vector<LossMatrix>(std::uint64_t trial_seed)>;

struct McMultiEstimate {
    std::size_t trials = 0;
    std::size_t feasible_trials = 0;
    std::size_t infeasible_trials = 0;
    std::size_t violations = 0;
    double violation_rate = 0.0;
    double tolerance = 0.0;
    CalibrationMode mode = CalibrationMode::Ideal;
    double delta = 0.0;
};

McMultiEstimate monte_carlo_guarantee_multi(const AxisMatrixGenerator& generator,
                                            CalibrationMode mode, const MultiControlSpec& spec,
                                            std::size_t trials, std::uint64_t seed);

/// Selective-regression trial fixture. data_cfg's n and seed govern a
/// one-off training draw for the forest; each trial then scores `rows`
/// fresh samples from the same distribution with the frozen model, so the
/// rows of every trial matrix are exchangeable.
RowMatrixGenerator selective_trial_generator(const ParamGrid& grid, std::size_t rows,
                                             const SyntheticRegressionConfig& data_cfg,
                                             const EnsembleConfig& model_cfg);

/// Segmentation trial fixture: each trial draws `rows` fresh fields.
RowMatrixGenerator segmentation_trial_generator(const ParamGrid& grid, std::size_t rows,
                                                const SyntheticFieldConfig& field_cfg);

/// Multi-target fixture: one forest per target column, axis j carrying the
/// selective loss of target j over the shared scalar grid.
AxisMatrixGenerator multi_selective_trial_generator(const ParamGrid& axis_grid, std::size_t rows,
                                                    const SyntheticRegressionConfig& data_cfg,
                                                    const EnsembleConfig& model_cfg);

}  // namespace losscal
