#include "losscal/fields.hpp"

#include <cmath>
#include <sstream>

#include "losscal/errors.hpp"

namespace losscal {

Field::Field(std::size_t rows_, std::size_t cols_, std::vector<double> values_)
    : rows(rows_), cols(cols_), values(std::move(values_)) {
    if (rows == 0 || cols == 0) {
        throw ConfigError("field dimensions must be positive");
    }
    if (values.size() != rows * cols) {
        std::ostringstream msg;
        msg << "field has " << values.size() << " values for " << rows << "x" << cols;
        throw ConfigError(msg.str());
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ConfigError("field values must be finite");
        }
    }
}

GridPredictionSet::GridPredictionSet(std::size_t rows_, std::size_t cols_,
                                     std::vector<std::uint8_t> member_)
    : rows(rows_), cols(cols_), member(std::move(member_)) {
    if (rows == 0 || cols == 0) {
        throw ConfigError("prediction set dimensions must be positive");
    }
    if (member.size() != rows * cols) {
        std::ostringstream msg;
        msg << "membership mask has " << member.size() << " cells for " << rows << "x"
            << cols;
        throw ConfigError(msg.str());
    }
}

std::size_t GridPredictionSet::count() const {
    std::size_t c = 0;
    for (std::uint8_t m : member) c += m != 0;
    return c;
}

GridPredictionSet segmentation_threshold(const Field& probs, double lambda) {
    std::vector<std::uint8_t> member(probs.values.size());
    for (std::size_t idx = 0; idx < probs.values.size(); ++idx) {
        const double p = probs.values[idx];
        if (p < 0.0 || p > 1.0) {
            std::ostringstream msg;
            msg << "probability " << p << " at cell " << idx / probs.cols << ","
                << idx % probs.cols << " lies outside [0,1]";
            throw ConfigError(msg.str());
        }
        member[idx] = p >= lambda ? 1 : 0;
    }
    return GridPredictionSet(probs.rows, probs.cols, std::move(member));
}

double false_discovery_loss(const GridPredictionSet& y, const GridPredictionSet& F) {
    if (y.rows != F.rows || y.cols != F.cols) {
        std::ostringstream msg;
        msg << "label grid " << y.rows << "x" << y.cols << " does not match prediction grid "
            << F.rows << "x" << F.cols;
        throw ConfigError(msg.str());
    }
    std::size_t selected = 0;
    std::size_t hits = 0;
    for (std::size_t idx = 0; idx < F.member.size(); ++idx) {
        if (F.member[idx] != 0) {
            ++selected;
            if (y.member[idx] != 0) ++hits;
        }
    }
    if (selected == 0) return 0.0;
    return 1.0 - static_cast<double>(hits) / static_cast<double>(selected);
}

double normalized_size(const GridPredictionSet& F) {
    return static_cast<double>(F.count()) /
           static_cast<double>(F.rows * F.cols);
}

}  // namespace losscal
