#include "losscal/report.hpp"

#include <fstream>

#include "json.hpp"
#include "losscal/csv_io.hpp"
#include "losscal/errors.hpp"

namespace losscal {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* mode_tag(CalibrationMode mode) {
    return mode == CalibrationMode::Ideal ? "ideal" : "practical";
}

ordered_json plan_json(const SplitPlan& plan) {
    ordered_json j;
    j["test_frac"] = plan.test_frac;
    j["calib_frac_of_rest"] = plan.calib_frac_of_rest;
    j["seed"] = plan.seed;
    j["repeats"] = plan.repeats;
    return j;
}

}  // namespace

std::string trial_report_json(const TrialReport& report) {
    ordered_json j;
    j["family"] = report.family;
    j["plan"] = plan_json(report.plan);
    j["sample_count"] = report.sample_count;
    j["alphas"] = report.alphas;
    j["deltas"] = report.deltas;

    ordered_json cells = ordered_json::array();
    for (const CellResult& cell : report.cells) {
        ordered_json c;
        c["alpha"] = cell.alpha;
        c["delta"] = cell.delta;
        c["repeat"] = cell.repeat;
        c["feasible"] = cell.feasible;
        if (cell.feasible) {
            c["lambda_star"] = cell.lambda_star;
            c["feasible_size"] = cell.feasible_size;
            c["violation_freq"] = cell.violation_freq;
            c["efficiency"] = cell.efficiency;
        }
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);

    ordered_json summaries = ordered_json::array();
    for (const CellSummary& s : report.summaries) {
        ordered_json c;
        c["alpha"] = s.alpha;
        c["delta"] = s.delta;
        c["feasible_repeats"] = s.feasible_repeats;
        if (s.feasible_repeats > 0) {
            c["mean_lambda"] = s.mean_lambda;
            c["mean_violation"] = s.mean_violation;
            c["mean_efficiency"] = s.mean_efficiency;
        }
        summaries.push_back(std::move(c));
    }
    j["summaries"] = std::move(summaries);
    return j.dump(2) + "\n";
}

std::string mc_estimate_json(const McEstimate& est) {
    ordered_json j;
    j["mode"] = mode_tag(est.mode);
    j["alpha"] = est.alpha;
    j["delta"] = est.delta;
    j["trials"] = est.trials;
    j["feasible_trials"] = est.feasible_trials;
    j["infeasible_trials"] = est.infeasible_trials;
    j["violations"] = est.violations;
    j["violation_rate"] = est.violation_rate;
    j["tolerance"] = est.tolerance;
    j["inclusion_violations"] = est.inclusion_violations;
    j["both_feasible"] = est.both_feasible;
    j["lambda_agreements"] = est.lambda_agreements;
    j["agreement_rate"] = est.agreement_rate;
    return j.dump(2) + "\n";
}

std::string mc_multi_estimate_json(const McMultiEstimate& est) {
    ordered_json j;
    j["mode"] = mode_tag(est.mode);
    j["delta"] = est.delta;
    j["trials"] = est.trials;
    j["feasible_trials"] = est.feasible_trials;
    j["infeasible_trials"] = est.infeasible_trials;
    j["violations"] = est.violations;
    j["violation_rate"] = est.violation_rate;
    j["tolerance"] = est.tolerance;
    return j.dump(2) + "\n";
}

void write_trial_report_csv(const std::filesystem::path& path, const TrialReport& report) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "alpha,delta,repeat,feasible,lambda_star,feasible_size,violation_freq,efficiency\n";
    for (const CellResult& cell : report.cells) {
        out << format_double(cell.alpha) << ',' << format_double(cell.delta) << ',' << cell.repeat
            << ',' << (cell.feasible ? 1 : 0) << ',';
        if (cell.feasible) {
            out << format_double(cell.lambda_star) << ',' << cell.feasible_size << ','
                << format_double(cell.violation_freq) << ',' << format_double(cell.efficiency);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

void write_trial_summary_csv(const std::filesystem::path& path, const TrialReport& report) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "alpha,delta,feasible_repeats,mean_lambda,mean_violation,mean_efficiency\n";
    for (const CellSummary& s : report.summaries) {
        out << format_double(s.alpha) << ',' << format_double(s.delta) << ',' << s.feasible_repeats
            << ',';
        if (s.feasible_repeats > 0) {
            out << format_double(s.mean_lambda) << ',' << format_double(s.mean_violation) << ','
                << format_double(s.mean_efficiency);
        } else {
            out << ",,";
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

}  // namespace losscal
