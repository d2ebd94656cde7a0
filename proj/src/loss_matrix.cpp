#include "losscal/loss_matrix.hpp"

#include <cmath>
#include <sstream>

namespace losscal {

LossMatrix::LossMatrix(std::vector<double> values, std::size_t n, ParamGrid grid)
    : values_(std::move(values)), n_(n), grid_(std::move(grid)) {
    if (n_ == 0) {
        throw ConfigError("loss matrix needs at least one sample row");
    }
    if (values_.size() != n_ * grid_.size()) {
        std::ostringstream msg;
        msg << "loss matrix shape mismatch: " << values_.size() << " values for "
            << n_ << " samples x " << grid_.size() << " grid points";
        throw ConfigError(msg.str());
    }
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (!std::isfinite(values_[idx])) {
            std::ostringstream msg;
            msg << "non-finite loss at sample " << idx / grid_.size()
                << ", grid point " << idx % grid_.size();
            throw ConfigError(msg.str());
        }
    }
}

std::vector<double> LossMatrix::column(std::size_t k) const {
    if (k >= grid_.size()) {
        std::ostringstream msg;
        msg << "column " << k << " out of range for grid of size " << grid_.size();
        throw ConfigError(msg.str());
    }
    std::vector<double> col(n_);
    for (std::size_t i = 0; i < n_; ++i) col[i] = values_[i * grid_.size() + k];
    return col;
}

}  // namespace losscal
