#pragma once

#include <functional>

#include "pathfinder/polynomial.hpp"

namespace pathfinder {

/// Entire amplitude f in the integrand f(z) e^{i omega g(z)}.
using Amplitude = std::function<Complex(Complex)>;

inline Amplitude unit_amplitude() {
    return [](Complex) { return Complex(1.0); };
}

} // namespace pathfinder
