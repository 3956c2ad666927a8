#pragma once

#include <stdexcept>

namespace pathfinder {

// Bad user input: malformed request, parameters out of range, divergent contour spec.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to converge or exceeded its budget.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pathfinder
