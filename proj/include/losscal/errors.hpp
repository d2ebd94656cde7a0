#pragma once

#include <stdexcept>
#include <string>

namespace losscal {

/// Invalid user-supplied configuration or arguments.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// File or stream I/O failure, including malformed input files.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// The feasible set of a calibration problem is empty: the requested loss
/// level cannot be certified at the requested confidence on this data.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace losscal
