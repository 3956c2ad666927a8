#pragma once

#include <cmath>
#include <numbers>

#include "pathfinder/polynomial.hpp"

namespace pathfinder {

/// Integration contour endpoint: a finite complex point or a direction to
/// infinity given by an angle (reduced mod 2*pi on construction).
struct Endpoint {
    enum class Kind { Finite, Infinite };
    Kind kind = Kind::Finite;
    Complex position{};
    double angle = 0.0;

    static Endpoint finite(Complex z) { return {Kind::Finite, z, 0.0}; }
    static Endpoint infinite(double theta) {
        double t = std::fmod(theta, 2.0 * std::numbers::pi);
        if (t < 0.0)
            t += 2.0 * std::numbers::pi;
        return {Kind::Infinite, Complex{}, t};
    }
    bool is_finite() const { return kind == Kind::Finite; }
};

} // namespace pathfinder
