#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "losscal/loss_matrix.hpp"
#include "losscal/synthetic.hpp"

namespace losscal {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Strict double parse; `context` names the location for error messages.
double parse_double(std::string_view text, const std::string& context);

std::vector<std::string> split_fields(std::string_view line, char sep);

/// Header row names the grid points as lambda_<c0;c1;...>, then one row of
/// losses per calibration sample. Columns follow the grid's sorted order.
void write_loss_matrix_csv(const std::filesystem::path& path, const LossMatrix& matrix);

/// Accepts columns in any order and reorders them to the canonical sorted
/// grid order. Errors name the offending line and column (1-based).
LossMatrix read_loss_matrix_csv(const std::filesystem::path& path);

/// Header x0,...,x<d-1>,target0,...,target<m-1>, then one row per sample.
void write_regression_csv(const std::filesystem::path& path, const RegressionDataset& data);

/// Any column whose name starts with "target" is a target, every other
/// column a feature; both keep their order of appearance. Needs at least
/// one of each and at least one data row.
RegressionDataset read_regression_csv(const std::filesystem::path& path);

}  // namespace losscal
