#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "losscal/calibration.hpp"
#include "losscal/csv_io.hpp"
#include "losscal/errors.hpp"
#include "losscal/field_io.hpp"
#include "losscal/harness.hpp"
#include "losscal/multi_control.hpp"
#include "losscal/report.hpp"
#include "losscal/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace losscal;

namespace {

double flag_number(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
        throw ConfigError(what + ": cannot parse '" + text + "' as a number");
    }
    return value;
}

/// "start:stop:step" becomes an evenly spaced scalar grid; anything else is
/// read as a file with one grid value per line.
ParamGrid parse_grid_spec(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        const auto parts = split_fields(text, ':');
        if (parts.size() != 3) {
            throw ConfigError("grid spec '" + text + "' must be start:stop:step");
        }
        return ParamGrid::linspace(flag_number(parts[0], "grid start"),
                                   flag_number(parts[1], "grid stop"),
                                   flag_number(parts[2], "grid step"));
    }
    std::ifstream in(text);
    if (!in) {
        throw IoError("no such input: '" + text + "'");
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        values.push_back(parse_double(line, text + ": line " + std::to_string(line_no)));
    }
    if (values.empty()) {
        throw IoError(text + ": no grid values");
    }
    try {
        return ParamGrid::from_values(std::move(values));
    } catch (const ConfigError& e) {
        throw IoError(text + ": " + e.what());
    }
}

SearchFunction parse_search(const std::string& name) {
    if (name == "min") return SearchFunction::min();
    if (name == "max") return SearchFunction::max();
    if (name == "first") return SearchFunction::first_in_grid_order();
    throw ConfigError("unknown search '" + name + "': expected min, max, or first");
}

CalibrationMode parse_mode(const std::string& name) {
    if (name == "practical") return CalibrationMode::Practical;
    if (name == "ideal") return CalibrationMode::Ideal;
    throw ConfigError("unknown mode '" + name + "': expected practical or ideal");
}

const char* mode_tag(CalibrationMode mode) {
    return mode == CalibrationMode::Ideal ? "ideal" : "practical";
}

std::string point_text(const GridPoint& p) {
    std::string out;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j > 0) out += ';';
        out += format_double(p[j]);
    }
    return out;
}

// ---------------------------------------------------------------- config io

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("no such input: '" + path + "'");
    }
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
    if (!cfg.is_object()) {
        throw IoError(path + ": config must be a JSON object");
    }
    return cfg;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(where + "." + key + " must be a number");
    }
    return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback,
                      const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(where + "." + key + " must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError(where + "." + key + " must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const char* key,
                                    std::vector<double> fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        throw ConfigError(where + "." + key + " must be a nonempty array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& item : v) {
        if (!item.is_number()) {
            throw ConfigError(where + "." + key + " must be a nonempty array of numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

NoiseModel parse_noise(const std::string& name, const std::string& where) {
    if (name == "homoscedastic") return NoiseModel::Homoscedastic;
    if (name == "heteroscedastic") return NoiseModel::Heteroscedastic;
    throw ConfigError(where + ".noise must be 'homoscedastic' or 'heteroscedastic'");
}

/// Training-draw and distribution knobs for the regression families. n and
/// seed govern the one-off training sample; trials redraw fresh data.
SyntheticRegressionConfig regression_from_json(const json* data, std::size_t targets,
                                               const std::string& where) {
    SyntheticRegressionConfig cfg;
    cfg.n = 600;
    cfg.noise = NoiseModel::Heteroscedastic;
    cfg.seed = 11u;
    cfg.targets = targets;
    if (data) {
        check_keys(*data, where, {"n", "dim", "noise", "noise_scale", "seed"});
        cfg.n = get_count(*data, "n", cfg.n, where);
        cfg.dim = get_count(*data, "dim", cfg.dim, where);
        cfg.noise = parse_noise(get_string(*data, "noise", "heteroscedastic", where), where);
        cfg.noise_scale = get_number(*data, "noise_scale", cfg.noise_scale, where);
        cfg.seed = get_count(*data, "seed", cfg.seed, where);
    }
    return cfg;
}

SyntheticFieldConfig fields_from_json(const json* data, const std::string& where) {
    SyntheticFieldConfig cfg;
    if (data) {
        check_keys(*data, where, {"n", "rows", "cols", "event_rate", "sharpness", "seed"});
        cfg.n = get_count(*data, "n", cfg.n, where);
        cfg.rows = get_count(*data, "rows", cfg.rows, where);
        cfg.cols = get_count(*data, "cols", cfg.cols, where);
        cfg.event_rate = get_number(*data, "event_rate", cfg.event_rate, where);
        cfg.sharpness = get_number(*data, "sharpness", cfg.sharpness, where);
        cfg.seed = get_count(*data, "seed", cfg.seed, where);
    }
    return cfg;
}

EnsembleConfig model_from_json(const json* model, const std::string& where) {
    std::size_t trees = 40;
    std::uint64_t seed = 9u;
    std::string variant = "rf";
    if (model) {
        check_keys(*model, where, {"trees", "variant", "seed"});
        trees = get_count(*model, "trees", trees, where);
        variant = get_string(*model, "variant", variant, where);
        seed = get_count(*model, "seed", seed, where);
    }
    if (variant == "rf") return EnsembleConfig::random_forest(trees, seed);
    if (variant == "ert") return EnsembleConfig::extra_trees(trees, seed);
    throw ConfigError(where + ".variant must be 'rf' or 'ert'");
}

// ------------------------------------------------------------------ runs

struct McRun {
    std::string family;  // selective | segmentation | multi
    CalibrationMode mode = CalibrationMode::Ideal;
    std::vector<double> alphas{0.05};
    std::vector<double> weights;  // multi only; empty = uniform
    double delta = 0.1;
    double bound = 1.0;
    std::optional<ParamGrid> grid;
    std::string search = "max";
    std::size_t rows = 201;
    std::size_t trials = 2000;
    std::uint64_t seed = 1u;
    std::string out = "losscal-out";
    SyntheticRegressionConfig regression;
    SyntheticFieldConfig fields;
    EnsembleConfig model = EnsembleConfig::random_forest(40, 9u);
};

int run_mc(const McRun& run) {
    const ParamGrid grid = run.grid ? *run.grid : ParamGrid::linspace(0.0, 1.0, 0.01);
    fs::create_directories(run.out);
    const fs::path report_path = fs::path(run.out) / "estimate.json";

    if (run.family == "multi") {
        std::vector<LossBound> bounds(run.alphas.size(), LossBound{run.bound});
        const MultiControlSpec spec =
            run.weights.empty() ? MultiControlSpec(run.alphas, run.delta, bounds)
                                : MultiControlSpec(run.alphas, run.delta, bounds, run.weights);
        const auto gen = multi_selective_trial_generator(grid, run.rows, run.regression, run.model);
        const McMultiEstimate est =
            monte_carlo_guarantee_multi(gen, run.mode, spec, run.trials, run.seed);
        std::cout << "monte carlo estimate (multi-target selective, " << mode_tag(est.mode)
                  << " mode)\n"
                  << "  trials " << est.trials << ", rows " << run.rows << ", losses "
                  << run.alphas.size() << ", delta " << format_double(est.delta) << "\n"
                  << "  feasible trials " << est.feasible_trials << ", infeasible "
                  << est.infeasible_trials << "\n"
                  << "  joint violation rate " << format_double(est.violation_rate)
                  << " (bound delta + tolerance = "
                  << format_double(est.delta + est.tolerance) << ")\n"
                  << "  report: " << report_path.string() << "\n";
        write_text_file(report_path, mc_multi_estimate_json(est));
        return 0;
    }

    const ControlSpec spec(run.alphas.front(), run.delta, LossBound{run.bound});
    const SearchFunction search = parse_search(run.search);
    const RowMatrixGenerator gen =
        run.family == "selective"
            ? selective_trial_generator(grid, run.rows, run.regression, run.model)
            : segmentation_trial_generator(grid, run.rows, run.fields);
    const McEstimate est = monte_carlo_guarantee(gen, run.mode, spec, search, run.trials, run.seed);
    std::cout << "monte carlo estimate (" << run.family << ", " << mode_tag(est.mode)
              << " mode)\n"
              << "  trials " << est.trials << ", rows " << run.rows << " ("
              << run.rows - 1 << " calibration + 1 test)\n"
              << "  alpha " << format_double(est.alpha) << ", delta " << format_double(est.delta)
              << "\n"
              << "  feasible trials " << est.feasible_trials << ", infeasible "
              << est.infeasible_trials << "\n"
              << "  violation rate " << format_double(est.violation_rate)
              << " (bound delta + tolerance = " << format_double(est.delta + est.tolerance)
              << ")\n"
              << "  practical/ideal agreement " << format_double(est.agreement_rate)
              << ", inclusion violations " << est.inclusion_violations << "\n"
              << "  report: " << report_path.string() << "\n";
    write_text_file(report_path, mc_estimate_json(est));
    return 0;
}

struct SplitRun {
    std::string family;  // selective | segmentation
    std::vector<double> alphas{0.02};
    std::vector<double> deltas{0.1};
    double bound = 1.0;
    std::optional<ParamGrid> grid;
    std::string search;  // empty = family default
    SplitPlan plan;
    std::size_t n = 2000;  // synthetic dataset size
    std::string data_csv;     // selective: optional CSV override
    std::string data_fields;  // segmentation: optional file or directory override
    std::string out = "losscal-out";
    SyntheticRegressionConfig regression;
    SyntheticFieldConfig fields;
    EnsembleConfig model = EnsembleConfig::random_forest(40, 9u);
};

int run_split(const SplitRun& run) {
    const ParamGrid grid = run.grid ? *run.grid : ParamGrid::linspace(0.0, 1.0, 0.01);
    SweepSpec sweep;
    sweep.alphas = run.alphas;
    sweep.deltas = run.deltas;
    sweep.bound = LossBound{run.bound};
    const std::string search_name =
        run.search.empty() ? (run.family == "selective" ? "max" : "min") : run.search;
    const SearchFunction search = parse_search(search_name);

    TrialReport report = [&] {
        if (run.family == "selective") {
            RegressionDataset data;
            if (!run.data_csv.empty()) {
                data = read_regression_csv(run.data_csv);
            } else {
                SyntheticRegressionConfig cfg = run.regression;
                cfg.n = run.n;
                data = generate_regression(cfg);
            }
            return run_selective_split_experiment(data, run.model, grid, sweep, search, run.plan);
        }
        FieldDataset data;
        if (!run.data_fields.empty()) {
            data = fs::is_directory(run.data_fields)
                       ? read_field_dataset_csv_dir(run.data_fields)
                       : read_field_dataset(run.data_fields);
        } else {
            SyntheticFieldConfig cfg = run.fields;
            cfg.n = run.n;
            data = generate_fields(cfg);
        }
        return run_segmentation_split_experiment(data, grid, sweep, search, run.plan);
    }();

    fs::create_directories(run.out);
    const fs::path json_path = fs::path(run.out) / "report.json";
    const fs::path cells_path = fs::path(run.out) / "cells.csv";
    const fs::path summary_path = fs::path(run.out) / "summary.csv";
    write_text_file(json_path, trial_report_json(report));
    write_trial_report_csv(cells_path, report);
    write_trial_summary_csv(summary_path, report);

    const char* efficiency_name =
        run.family == "selective" ? "miscoverage" : "normalized size";
    std::cout << "split experiment (" << report.family << ", " << report.sample_count
              << " samples, " << report.plan.repeats << " repeats, search " << search_name
              << ")\n";
    for (const CellSummary& s : report.summaries) {
        std::cout << "  alpha " << format_double(s.alpha) << ", delta " << format_double(s.delta)
                  << ": feasible repeats " << s.feasible_repeats;
        if (s.feasible_repeats > 0) {
            std::cout << ", mean lambda* " << format_double(s.mean_lambda)
                      << ", mean violation " << format_double(s.mean_violation) << ", mean "
                      << efficiency_name << " " << format_double(s.mean_efficiency);
        }
        std::cout << "\n";
    }
    std::cout << "  reports: " << json_path.string() << ", " << cells_path.string() << ", "
              << summary_path.string() << "\n";
    return 0;
}

// --------------------------------------------------------------- validate

int run_validate(const std::string& config_path, const std::string& out_override) {
    const json cfg = load_config(config_path);
    const std::string operation = get_string(cfg, "operation", "", "config");
    if (operation == "monte-carlo") {
        check_keys(cfg, "config",
                   {"operation", "family", "mode", "alpha", "alphas", "weights", "delta", "bound",
                    "grid", "search", "rows", "trials", "seed", "out", "data", "model"});
        McRun run;
        run.family = get_string(cfg, "family", "selective", "config");
        if (run.family != "selective" && run.family != "segmentation" && run.family != "multi") {
            throw ConfigError("config.family must be selective, segmentation, or multi");
        }
        run.mode = parse_mode(get_string(cfg, "mode", "ideal", "config"));
        if (run.family == "multi") {
            run.alphas = get_number_list(cfg, "alphas", {0.02, 0.02}, "config");
            run.weights = get_number_list(cfg, "weights", {}, "config");
            if (cfg.contains("alpha")) {
                throw ConfigError("config.alpha does not apply to the multi family; use alphas");
            }
            if (cfg.contains("search")) {
                throw ConfigError(
                    "config.search does not apply to the multi family; per-axis control always "
                    "takes the largest feasible point");
            }
        } else {
            run.alphas = {get_number(cfg, "alpha", 0.05, "config")};
            if (cfg.contains("alphas")) {
                throw ConfigError("config.alphas applies only to the multi family; use alpha");
            }
            if (cfg.contains("weights")) {
                throw ConfigError("config.weights applies only to the multi family");
            }
        }
        run.delta = get_number(cfg, "delta", run.delta, "config");
        run.bound = get_number(cfg, "bound", run.bound, "config");
        if (cfg.contains("grid")) {
            run.grid = parse_grid_spec(get_string(cfg, "grid", "", "config"));
        }
        run.search = get_string(cfg, "search", run.family == "segmentation" ? "min" : "max",
                                "config");
        run.rows = get_count(cfg, "rows", run.rows, "config");
        run.trials = get_count(cfg, "trials", run.trials, "config");
        run.seed = get_count(cfg, "seed", run.seed, "config");
        run.out = get_string(cfg, "out", run.out, "config");
        if (!out_override.empty()) run.out = out_override;

        const json* data = cfg.contains("data") ? &cfg.at("data") : nullptr;
        const json* model = cfg.contains("model") ? &cfg.at("model") : nullptr;
        if (run.family == "segmentation") {
            if (model) {
                throw ConfigError("config.model does not apply to the segmentation family");
            }
            run.fields = fields_from_json(data, "config.data");
        } else {
            const std::size_t targets = run.family == "multi" ? run.alphas.size() : 1;
            run.regression = regression_from_json(data, targets, "config.data");
            run.model = model_from_json(model, "config.model");
        }
        return run_mc(run);
    }
    if (operation == "split") {
        check_keys(cfg, "config",
                   {"operation", "family", "alphas", "deltas", "bound", "grid", "search",
                    "repeats", "seed", "test_frac", "calib_frac_of_rest", "n", "data", "data_csv",
                    "data_fields", "model", "out"});
        SplitRun run;
        run.family = get_string(cfg, "family", "selective", "config");
        if (run.family != "selective" && run.family != "segmentation") {
            throw ConfigError(
                "split experiments cover the selective and segmentation families only");
        }
        run.alphas = get_number_list(cfg, "alphas", run.alphas, "config");
        run.deltas = get_number_list(cfg, "deltas", run.deltas, "config");
        run.bound = get_number(cfg, "bound", run.bound, "config");
        if (cfg.contains("grid")) {
            run.grid = parse_grid_spec(get_string(cfg, "grid", "", "config"));
        }
        run.search = get_string(cfg, "search", "", "config");
        run.plan.repeats = get_count(cfg, "repeats", run.plan.repeats, "config");
        run.plan.seed = get_count(cfg, "seed", run.plan.seed, "config");
        run.plan.test_frac = get_number(cfg, "test_frac", run.plan.test_frac, "config");
        run.plan.calib_frac_of_rest =
            get_number(cfg, "calib_frac_of_rest", run.plan.calib_frac_of_rest, "config");
        run.n = get_count(cfg, "n", run.n, "config");
        run.data_csv = get_string(cfg, "data_csv", "", "config");
        run.data_fields = get_string(cfg, "data_fields", "", "config");
        run.out = get_string(cfg, "out", run.out, "config");
        if (!out_override.empty()) run.out = out_override;

        const json* data = cfg.contains("data") ? &cfg.at("data") : nullptr;
        const json* model = cfg.contains("model") ? &cfg.at("model") : nullptr;
        if (run.family == "segmentation") {
            if (model) {
                throw ConfigError("config.model does not apply to the segmentation family");
            }
            if (!run.data_csv.empty()) {
                throw ConfigError("config.data_csv applies to the selective family; "
                                  "use data_fields for segmentation");
            }
            run.fields = fields_from_json(data, "config.data");
        } else {
            if (!run.data_fields.empty()) {
                throw ConfigError("config.data_fields applies to the segmentation family; "
                                  "use data_csv for selective");
            }
            run.regression = regression_from_json(data, 1, "config.data");
            run.model = model_from_json(model, "config.model");
        }
        return run_split(run);
    }
    throw ConfigError("config.operation must be 'monte-carlo' or 'split'");
}

// --------------------------------------------------------------- calibrate

struct CalibrateOpts {
    std::string matrix;
    double alpha = 0.1;
    double delta = 0.1;
    double bound = 1.0;
    std::string search = "min";
    std::string mode = "practical";
    std::string out = "losscal-out";
};

int run_calibrate(const CalibrateOpts& opts) {
    const LossMatrix matrix = read_loss_matrix_csv(opts.matrix);
    const ControlSpec spec(opts.alpha, opts.delta, LossBound{opts.bound});
    const SearchFunction search = parse_search(opts.search);
    const CalibrationMode mode = parse_mode(opts.mode);
    const CalibrationResult result = mode == CalibrationMode::Practical
                                         ? calibrate(matrix, spec, search)
                                         : calibrate_ideal(matrix, spec, search);

    fs::create_directories(opts.out);
    const fs::path quantiles_path = fs::path(opts.out) / "quantiles.csv";
    {
        std::ofstream out(quantiles_path);
        if (!out) {
            throw IoError("cannot open '" + quantiles_path.string() + "' for writing");
        }
        out << "lambda,quantile\n";
        for (std::size_t k = 0; k < matrix.grid().size(); ++k) {
            out << point_text(matrix.grid()[k]) << ',' << format_double(result.quantiles[k])
                << '\n';
        }
    }

    nlohmann::ordered_json j;
    j["lambda_star"] = result.lambda_star;
    j["lambda_index"] = result.lambda_index;
    j["feasible_indices"] = result.feasible;
    j["grid_size"] = matrix.grid().size();
    j["sample_count"] = result.sample_count;
    j["alpha"] = spec.alpha;
    j["delta"] = spec.delta;
    j["bound"] = spec.bound.value;
    j["mode"] = mode_tag(result.mode);
    j["search"] = result.search_name;
    const fs::path report_path = fs::path(opts.out) / "calibration.json";
    write_text_file(report_path, j.dump(2) + "\n");

    std::cout << "loss-controlling calibration (" << mode_tag(result.mode) << " mode, search "
              << result.search_name << ")\n"
              << "  samples " << result.sample_count << ", grid points " << matrix.grid().size()
              << "\n"
              << "  alpha " << format_double(spec.alpha) << ", delta " << format_double(spec.delta)
              << ", bound " << format_double(spec.bound.value) << "\n"
              << "  lambda* = " << point_text(result.lambda_star) << " (index "
              << result.lambda_index << ")\n"
              << "  feasible points: " << result.feasible.size() << " of " << matrix.grid().size()
              << "\n"
              << "  quantile table: " << quantiles_path.string() << "\n"
              << "  report: " << report_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"losscal: loss-controlling calibration toolkit"};
    app.require_subcommand(1);

    CalibrateOpts cal;
    CLI::App* cmd_cal = app.add_subcommand(
        "calibrate", "Calibrate a threshold from a loss-matrix CSV");
    cmd_cal->add_option("--matrix", cal.matrix, "Loss matrix CSV path")->required();
    cmd_cal->add_option("--alpha", cal.alpha, "Target loss level");
    cmd_cal->add_option("--delta", cal.delta, "Confidence complement, in (0,1)");
    cmd_cal->add_option("--bound", cal.bound, "A-priori loss bound B");
    cmd_cal->add_option("--search", cal.search, "Selection rule: min, max, or first");
    cmd_cal->add_option("--mode", cal.mode, "practical (bound-augmented) or ideal");
    cmd_cal->add_option("--out", cal.out, "Report directory");

    std::string validate_config, validate_out;
    CLI::App* cmd_val = app.add_subcommand(
        "validate", "Run a Monte Carlo or split experiment from a JSON config");
    cmd_val->add_option("--config", validate_config, "JSON config path")->required();
    cmd_val->add_option("--out", validate_out, "Override the config's report directory");

    CLI::App* cmd_demo = app.add_subcommand("demo", "End-to-end runs on synthetic data");
    cmd_demo->require_subcommand(1);

    struct {
        std::size_t trials = 500;
        std::size_t rows = 201;
        double alpha = 0.02;
        double delta = 0.1;
        std::string grid = "0:1:0.01";
        std::uint64_t seed = 7u;
        std::string out = "losscal-demo-selective";
    } dsel;
    CLI::App* cmd_dsel = cmd_demo->add_subcommand(
        "selective", "Selective regression with a bagged-forest uncertainty score");
    cmd_dsel->add_option("--trials", dsel.trials, "Monte Carlo trials");
    cmd_dsel->add_option("--rows", dsel.rows, "Rows per trial (calibration + 1 test)");
    cmd_dsel->add_option("--alpha", dsel.alpha, "Target loss level");
    cmd_dsel->add_option("--delta", dsel.delta, "Confidence complement");
    cmd_dsel->add_option("--grid", dsel.grid, "start:stop:step or a grid file");
    cmd_dsel->add_option("--seed", dsel.seed, "Root seed");
    cmd_dsel->add_option("--out", dsel.out, "Report directory");

    struct {
        std::size_t trials = 400;
        std::size_t rows = 121;
        std::vector<double> alphas;
        double delta = 0.1;
        std::uint64_t seed = 5u;
        std::string out = "losscal-demo-multi";
    } dmulti;
    CLI::App* cmd_dmulti = cmd_demo->add_subcommand(
        "multi", "Joint control of several selective-regression losses");
    cmd_dmulti->add_option("--trials", dmulti.trials, "Monte Carlo trials");
    cmd_dmulti->add_option("--rows", dmulti.rows, "Rows per trial (calibration + 1 test)");
    cmd_dmulti->add_option("--alpha", dmulti.alphas,
                           "Per-loss target level (repeat once per loss)");
    cmd_dmulti->add_option("--delta", dmulti.delta, "Joint confidence complement");
    cmd_dmulti->add_option("--seed", dmulti.seed, "Root seed");
    cmd_dmulti->add_option("--out", dmulti.out, "Report directory");

    struct {
        std::size_t n = 400;
        std::size_t repeats = 5;
        std::vector<double> alphas;
        std::vector<double> deltas;
        std::string grid = "0:1:0.01";
        std::uint64_t seed = 13u;
        std::string out = "losscal-demo-segmentation";
    } dseg;
    CLI::App* cmd_dseg = cmd_demo->add_subcommand(
        "segmentation", "Threshold probability fields under a false-discovery loss");
    cmd_dseg->add_option("--n", dseg.n, "Synthetic field samples");
    cmd_dseg->add_option("--repeats", dseg.repeats, "Split repeats");
    cmd_dseg->add_option("--alpha", dseg.alphas, "Target levels (repeatable)");
    cmd_dseg->add_option("--delta", dseg.deltas, "Confidence complements (repeatable)");
    cmd_dseg->add_option("--grid", dseg.grid, "start:stop:step or a grid file");
    cmd_dseg->add_option("--seed", dseg.seed, "Root seed");
    cmd_dseg->add_option("--out", dseg.out, "Report directory");

    try {
        app.parse(argc, argv);

        if (cmd_cal->parsed()) {
            return run_calibrate(cal);
        }
        if (cmd_val->parsed()) {
            return run_validate(validate_config, validate_out);
        }
        if (cmd_dsel->parsed()) {
            McRun run;
            run.family = "selective";
            run.alphas = {dsel.alpha};
            run.delta = dsel.delta;
            run.grid = parse_grid_spec(dsel.grid);
            run.rows = dsel.rows;
            run.trials = dsel.trials;
            run.seed = dsel.seed;
            run.out = dsel.out;
            run.regression = regression_from_json(nullptr, 1, "");
            return run_mc(run);
        }
        if (cmd_dmulti->parsed()) {
            McRun run;
            run.family = "multi";
            run.alphas = dmulti.alphas.empty() ? std::vector<double>{0.02, 0.02} : dmulti.alphas;
            run.delta = dmulti.delta;
            run.grid = ParamGrid::linspace(0.0, 1.0, 0.01);
            run.rows = dmulti.rows;
            run.trials = dmulti.trials;
            run.seed = dmulti.seed;
            run.out = dmulti.out;
            run.regression = regression_from_json(nullptr, run.alphas.size(), "");
            return run_mc(run);
        }
        if (cmd_dseg->parsed()) {
            SplitRun run;
            run.family = "segmentation";
            run.alphas = dseg.alphas.empty() ? std::vector<double>{0.3} : dseg.alphas;
            run.deltas = dseg.deltas.empty() ? std::vector<double>{0.1} : dseg.deltas;
            run.grid = parse_grid_spec(dseg.grid);
            run.plan.repeats = dseg.repeats;
            run.plan.seed = dseg.seed;
            run.n = dseg.n;
            run.fields.sharpness = 1.3;
            run.out = dseg.out;
            return run_split(run);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
