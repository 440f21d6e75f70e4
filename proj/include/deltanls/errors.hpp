#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deltanls {

/// Input outside the admissible parameter box (powers, mass, grid, frequency).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A profile that should have unit mass does not.
class NormalizationError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// A computation produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::ptrdiff_t node = -1)
        : std::runtime_error(what), node_(node) {}

    /// Offending grid node, or -1 when the failure is not tied to a node.
    std::ptrdiff_t node() const noexcept { return node_; }

private:
    std::ptrdiff_t node_;
};

/// A resampled profile does not fit inside the target grid.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace deltanls
