#pragma once

#include <filesystem>

#include "losscal/synthetic.hpp"

namespace losscal {

/// Packed little-endian container: "LCFD" magic, format version, counts,
/// then every forecast value as a double and every label as one byte.
void write_field_dataset(const std::filesystem::path& path, const FieldDataset& data);
FieldDataset read_field_dataset(const std::filesystem::path& path);

/// Directory layout: manifest.json plus forecast_NNNN.csv / labels_NNNN.csv
/// per sample, one comma-separated line per field row.
void write_field_dataset_csv_dir(const std::filesystem::path& dir, const FieldDataset& data);
FieldDataset read_field_dataset_csv_dir(const std::filesystem::path& dir);

}  // namespace losscal
