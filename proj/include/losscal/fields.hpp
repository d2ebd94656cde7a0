#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace losscal {

/// Dense P x Q array of reals, row-major.
struct Field {
    std::size_t rows;
    std::size_t cols;
    std::vector<double> values;

    Field(std::size_t rows_, std::size_t cols_, std::vector<double> values_);

    double at(std::size_t p, std::size_t q) const { return values[p * cols + q]; }
};

/// Subset of the cells of a P x Q grid, stored as a membership mask.
struct GridPredictionSet {
    std::size_t rows;
    std::size_t cols;
    std::vector<std::uint8_t> member;

    GridPredictionSet(std::size_t rows_, std::size_t cols_, std::vector<std::uint8_t> member_);

    bool contains(std::size_t p, std::size_t q) const { return member[p * cols + q] != 0; }
    std::size_t count() const;
};

/// Cells whose probability is at least lambda. Antitone in lambda: raising
/// the threshold never adds a cell.
GridPredictionSet segmentation_threshold(const Field& probs, double lambda);

/// One minus precision: 1 - |y ∩ F| / |F|. An empty F makes no discoveries
/// and scores 0. Bounded in [0,1].
double false_discovery_loss(const GridPredictionSet& y, const GridPredictionSet& F);

/// |F| / (P*Q), the efficiency summary for thresholded fields.
double normalized_size(const GridPredictionSet& F);

}  // namespace losscal
