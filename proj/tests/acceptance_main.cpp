// Standalone acceptance checks. Each check prints exactly one PASS/FAIL line;
// the exit code is the number of failures. Invoke as:
//   acceptance_checks <losscal binary> <configs dir>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "losscal/calibration.hpp"
#include "losscal/conformal.hpp"
#include "losscal/ensemble.hpp"
#include "losscal/fields.hpp"
#include "losscal/grid.hpp"
#include "losscal/harness.hpp"
#include "losscal/loss_matrix.hpp"
#include "losscal/multi_control.hpp"
#include "losscal/quantiles.hpp"
#include "losscal/rng.hpp"
#include "losscal/synthetic.hpp"

namespace fs = std::filesystem;
using namespace losscal;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

// 1: library quantiles against an independent full-sort oracle, with a wall
// clock budget of five seconds for the whole sweep.
Outcome check_quantile_oracle() {
    const std::vector<double> levels{0.5, 0.75, 0.8, 0.9, 0.9999};
    Rng rng(derive_seed(2468, 0));
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + rng.index(50);
        std::vector<double> values(n);
        const bool discrete = rng.bernoulli(0.5);
        for (double& v : values) {
            v = discrete ? static_cast<double>(rng.index(5)) / 4.0 : rng.uniform();
        }
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (const double level : levels) {
            const double got = conservative_quantile(values, QuantileLevel(level));
            const std::size_t k =
                static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
            const double want = sorted[k - 1];
            if (got != want) {
                return {false, "trial " + std::to_string(trial) + " level " + fmt(level) +
                                   ": got " + fmt(got) + ", oracle " + fmt(want)};
            }
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= 5.0) {
        return {false, "took " + fmt(elapsed) + "s, budget 5s"};
    }
    return {true, "10000 multisets, 5 levels, " + fmt(elapsed) + "s"};
}

// 2: the nested-set conformal shortcut and the general engine under min
// search must agree exactly, feasible or not, on random nonincreasing
// instances.
Outcome check_conformal_reduction() {
    Rng rng(derive_seed(1357, 0));
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t grid_size = 2 + rng.index(100);
        const std::size_t n = 1 + rng.index(500);
        std::vector<double> points(grid_size);
        for (std::size_t k = 0; k < grid_size; ++k) {
            points[k] = static_cast<double>(k) / static_cast<double>(grid_size - 1);
        }
        const ParamGrid grid = ParamGrid::from_values(points);
        std::vector<double> values(n * grid_size);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(grid_size);
            for (double& v : row) v = rng.uniform();
            std::sort(row.begin(), row.end(), std::greater<>());
            std::copy(row.begin(), row.end(), values.begin() + i * grid_size);
        }
        const LossMatrix matrix(std::move(values), n, grid);
        const ControlSpec spec(rng.uniform(0.05, 0.9), rng.uniform(0.05, 0.5), LossBound(1.0));

        bool direct_feasible = true;
        GridPoint direct;
        try {
            direct = clcp_calibrate(matrix, spec);
        } catch (const InfeasibleError&) {
            direct_feasible = false;
        }
        bool engine_feasible = true;
        GridPoint engine;
        try {
            engine = calibrate(matrix, spec, SearchFunction::min()).lambda_star;
        } catch (const InfeasibleError&) {
            engine_feasible = false;
        }
        if (direct_feasible != engine_feasible ||
            (direct_feasible && direct != engine)) {
            return {false, "trial " + std::to_string(trial) + " diverged"};
        }
    }
    return {true, "1000 random instances, exact agreement"};
}

struct McBundle {
    std::vector<McEstimate> estimates;
};

// 3 and 5 share these four runs: both families, delta in {0.1, 0.2}, 2000
// trials each, calibrating on 200 rows with one held-out test row.
McBundle run_ideal_mode_sweeps() {
    McBundle bundle;
    const ParamGrid grid = ParamGrid::linspace(0.0, 1.0, 0.01);

    SyntheticRegressionConfig data_cfg;
    data_cfg.n = 400;
    data_cfg.noise = NoiseModel::Heteroscedastic;
    data_cfg.seed = 77;
    const auto selective = selective_trial_generator(
        grid, 201, data_cfg, EnsembleConfig::random_forest(30, 5));

    SyntheticFieldConfig field_cfg;
    field_cfg.rows = 16;
    field_cfg.cols = 16;
    field_cfg.event_rate = 0.15;
    const auto segmentation = segmentation_trial_generator(grid, 201, field_cfg);

    std::uint64_t seed = 1010;
    for (const double delta : {0.1, 0.2}) {
        bundle.estimates.push_back(monte_carlo_guarantee(
            selective, CalibrationMode::Ideal, ControlSpec(0.02, delta, LossBound(1.0)),
            SearchFunction::max(), 2000, seed++));
        bundle.estimates.push_back(monte_carlo_guarantee(
            segmentation, CalibrationMode::Ideal, ControlSpec(0.3, delta, LossBound(1.0)),
            SearchFunction::min(), 2000, seed++));
    }
    return bundle;
}

Outcome check_ideal_mode_rates(const McBundle& bundle) {
    std::string rates;
    for (const McEstimate& est : bundle.estimates) {
        const double band = 3.0 * std::sqrt(est.delta * (1.0 - est.delta) / 2000.0);
        if (std::fabs(est.tolerance - band) > 1e-15) {
            return {false, "tolerance drifted from 3*sqrt(delta*(1-delta)/trials)"};
        }
        if (est.feasible_trials < 1800) {
            return {false, "only " + std::to_string(est.feasible_trials) +
                               " of 2000 trials were feasible"};
        }
        if (est.violation_rate > est.delta + band) {
            return {false, "rate " + fmt(est.violation_rate) + " above " +
                               fmt(est.delta + band) + " at delta " + fmt(est.delta)};
        }
        if (!rates.empty()) rates += "/";
        rates += fmt(est.violation_rate);
    }
    return {true, "rates " + rates + " within delta + 3*sqrt(delta*(1-delta)/2000)"};
}

Outcome check_feasible_set_inclusion(const McBundle& bundle) {
    std::size_t total = 0;
    for (const McEstimate& est : bundle.estimates) {
        total += est.inclusion_violations;
    }
    if (total != 0) {
        return {false, std::to_string(total) + " trials broke the inclusion"};
    }
    return {true, "8000 trials, zero inclusions broken"};
}

struct SplitBundle {
    TrialReport selective;
    TrialReport segmentation;
};

// 4 and 8 share these two sweeps: 2000 samples, 10 repeats, the 101-point
// unit grid, loss levels down to 0.003.
SplitBundle run_split_sweeps() {
    SplitBundle bundle;
    SweepSpec sweep;
    sweep.alphas = {0.003, 0.005, 0.01, 0.02, 0.05};
    sweep.deltas = {0.1, 0.15, 0.2};
    const ParamGrid grid = ParamGrid::linspace(0.0, 1.0, 0.01);

    SyntheticRegressionConfig data_cfg;
    data_cfg.n = 2000;
    data_cfg.noise = NoiseModel::Heteroscedastic;
    data_cfg.seed = 1234;
    SplitPlan plan;
    plan.seed = 42;
    bundle.selective = run_selective_split_experiment(
        generate_regression(data_cfg), EnsembleConfig::random_forest(40, 7), grid, sweep,
        SearchFunction::max(), plan);

    SyntheticFieldConfig field_cfg;
    field_cfg.n = 2000;
    field_cfg.seed = 4321;
    SplitPlan field_plan;
    field_plan.seed = 43;
    bundle.segmentation = run_segmentation_split_experiment(
        generate_fields(field_cfg), grid, sweep, SearchFunction::min(), field_plan);
    return bundle;
}

Outcome check_split_violations(const SplitBundle& bundle) {
    double worst_margin = -1.0;
    for (const TrialReport* report : {&bundle.selective, &bundle.segmentation}) {
        for (const CellSummary& cell : report->summaries) {
            if (cell.feasible_repeats < 9) {
                return {false, report->family + " cell alpha " + fmt(cell.alpha) + ", delta " +
                                   fmt(cell.delta) + " had only " +
                                   std::to_string(cell.feasible_repeats) + " feasible repeats"};
            }
            if (cell.mean_violation > cell.delta + 0.03) {
                return {false, report->family + " cell alpha " + fmt(cell.alpha) + ", delta " +
                                   fmt(cell.delta) + ": mean violation " +
                                   fmt(cell.mean_violation)};
            }
            worst_margin = std::max(worst_margin, cell.mean_violation - cell.delta);
        }
    }
    return {true, "30 cells, worst mean violation at delta + " + fmt(worst_margin)};
}

Outcome check_abstention_monotone(const SplitBundle& bundle) {
    const TrialReport& report = bundle.selective;
    for (const double delta : report.deltas) {
        double previous = 2.0;
        for (const double alpha : report.alphas) {
            const auto it = std::find_if(
                report.summaries.begin(), report.summaries.end(), [&](const CellSummary& s) {
                    return s.alpha == alpha && s.delta == delta;
                });
            if (it == report.summaries.end() || it->feasible_repeats == 0) {
                return {false, "missing summary cell"};
            }
            if (it->mean_efficiency > previous + 1e-12) {
                return {false, "abstention rose from " + fmt(previous) + " to " +
                                   fmt(it->mean_efficiency) + " at alpha " + fmt(alpha) +
                                   ", delta " + fmt(delta)};
            }
            previous = it->mean_efficiency;
        }
    }
    return {true, "nonincreasing across 5 loss levels at 3 confidence levels"};
}

// 6: joint control of 2 and 3 losses, each axis carved from the shared
// delta budget, ideal mode, 1000 trials.
Outcome check_joint_control() {
    const ParamGrid grid = ParamGrid::linspace(0.0, 1.0, 0.01);
    std::string rates;
    for (const std::size_t m : {std::size_t{2}, std::size_t{3}}) {
        std::vector<double> alphas{0.02, 0.02, 0.04};
        alphas.resize(m);
        const MultiControlSpec spec(alphas, 0.1,
                                    std::vector<LossBound>(m, LossBound(1.0)));
        SyntheticRegressionConfig data_cfg;
        data_cfg.n = 400;
        data_cfg.noise = NoiseModel::Heteroscedastic;
        data_cfg.targets = m;
        data_cfg.seed = 88;
        const auto gen = multi_selective_trial_generator(
            grid, 121, data_cfg, EnsembleConfig::random_forest(25, 6));
        const McMultiEstimate est = monte_carlo_guarantee_multi(
            gen, CalibrationMode::Ideal, spec, 1000, 909 + m);
        if (est.feasible_trials < 900) {
            return {false, std::to_string(m) + " losses: only " +
                               std::to_string(est.feasible_trials) + " feasible trials"};
        }
        if (est.violation_rate > est.delta + est.tolerance) {
            return {false, std::to_string(m) + " losses: joint rate " +
                               fmt(est.violation_rate) + " above " +
                               fmt(est.delta + est.tolerance)};
        }
        if (!rates.empty()) rates += "/";
        rates += fmt(est.violation_rate);
    }
    return {true, "joint rates " + rates + " at delta 0.1 over 1000 trials"};
}

// 7: growing a thresholded set can raise the false-discovery loss, so the
// loss is not monotone in the threshold and the general engine is needed.
Outcome check_fd_loss_not_monotone() {
    const Field probs(1, 2, {0.9, 0.4});
    const GridPredictionSet labels(1, 2, {1, 0});
    const GridPredictionSet small = segmentation_threshold(probs, 0.5);
    const GridPredictionSet large = segmentation_threshold(probs, 0.3);
    for (std::size_t q = 0; q < 2; ++q) {
        if (small.contains(0, q) && !large.contains(0, q)) {
            return {false, "sets are not nested"};
        }
    }
    const double small_loss = false_discovery_loss(labels, small);
    const double large_loss = false_discovery_loss(labels, large);
    if (small.count() != 1 || large.count() != 2 || small_loss != 0.0 || large_loss != 0.5) {
        return {false, "losses " + fmt(small_loss) + " and " + fmt(large_loss) +
                           " for sets of " + std::to_string(small.count()) + " and " +
                           std::to_string(large.count()) + " cells"};
    }
    return {true, "loss rose 0 -> 0.5 when the set grew from 1 to 2 cells"};
}

// 9: the CLI rerun on one config lands on byte-identical report files.
Outcome check_cli_reproducible(const std::string& cli, const std::string& configs) {
    if (cli.empty() || configs.empty()) {
        return {false, "needs the CLI binary and config directory as arguments"};
    }
    const fs::path config = fs::path(configs) / "ideal-mode-toy.json";
    const fs::path out_a = fs::temp_directory_path() / "losscal_accept_a";
    const fs::path out_b = fs::temp_directory_path() / "losscal_accept_b";
    const auto run = [&](const fs::path& out) {
        const std::string cmd = "'" + cli + "' validate --config '" + config.string() +
                                "' --out '" + out.string() + "' > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) && WEXITSTATUS(status) == 0;
    };
    const auto slurp = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    Outcome outcome{false, ""};
    if (!run(out_a) || !run(out_b)) {
        outcome.detail = "a validate run exited nonzero";
    } else {
        const std::string a = slurp(out_a / "estimate.json");
        const std::string b = slurp(out_b / "estimate.json");
        if (a.empty()) {
            outcome.detail = "no report was written";
        } else if (a != b) {
            outcome.detail = "reports differ between runs";
        } else {
            outcome = {true, "two runs, byte-identical estimate.json"};
        }
    }
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    return outcome;
}

Outcome guarded(Outcome (*fn)()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {false, std::string("threw: ") + e.what()};
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::string configs = argc > 2 ? argv[2] : "";

    std::vector<std::pair<std::string, Outcome>> results(9);
    results[0] = {"conservative quantiles match a full-sort oracle", guarded(check_quantile_oracle)};
    results[1] = {"nested-set conformal calibration equals min-search calibration",
                  guarded(check_conformal_reduction)};
    try {
        const McBundle bundle = run_ideal_mode_sweeps();
        results[2] = {"", check_ideal_mode_rates(bundle)};
        results[4] = {"", check_feasible_set_inclusion(bundle)};
    } catch (const std::exception& e) {
        results[2].second = {false, std::string("threw: ") + e.what()};
        results[4].second = {false, std::string("threw: ") + e.what()};
    }
    results[2].first = "ideal-mode violation rates stay inside the Monte Carlo band";
    results[4].first = "practical feasible sets sit inside ideal feasible sets";
    try {
        const SplitBundle bundle = run_split_sweeps();
        results[3] = {"", check_split_violations(bundle)};
        results[7] = {"", check_abstention_monotone(bundle)};
    } catch (const std::exception& e) {
        results[3].second = {false, std::string("threw: ") + e.what()};
        results[7].second = {false, std::string("threw: ") + e.what()};
    }
    results[3].first = "split-experiment mean violations stay below delta + 0.03";
    results[7].first = "selective abstention never rises as the loss level relaxes";
    results[5] = {"joint control of 2 and 3 losses holds at the shared level",
                  guarded(check_joint_control)};
    results[6] = {"false-discovery loss can rise when a prediction set grows",
                  guarded(check_fd_loss_not_monotone)};
    results[8] = {"repeated CLI runs produce byte-identical reports",
                  check_cli_reproducible(cli, configs)};

    int failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& [what, outcome] = results[i];
        std::cout << (outcome.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << what;
        if (!outcome.detail.empty()) {
            std::cout << " (" << outcome.detail << ")";
        }
        std::cout << "\n";
        if (!outcome.ok) ++failures;
    }
    return failures;
}
