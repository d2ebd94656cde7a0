#pragma once

#include <filesystem>
#include <string>

#include "losscal/harness.hpp"

namespace losscal {

/// JSON text with keys in a fixed order, so equal inputs serialize to
/// byte-identical strings. Infeasible cells carry only their coordinates
/// and feasible=false.
std::string trial_report_json(const TrialReport& report);
std::string mc_estimate_json(const McEstimate& est);
std::string mc_multi_estimate_json(const McMultiEstimate& est);

/// Flat per-cell table, one row per (alpha, delta, repeat) in report order.
/// Value columns of infeasible cells are left empty.
void write_trial_report_csv(const std::filesystem::path& path, const TrialReport& report);

/// One row per (alpha, delta) with the feasible-repeat means.
void write_trial_summary_csv(const std::filesystem::path& path, const TrialReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace losscal
