#pragma once

#include "pathfinder/amplitude.hpp"
#include "pathfinder/endpoint.hpp"
#include "pathfinder/polynomial.hpp"

// Brute-force reference integrator used only by tests and acceptance runs.
// Deliberately independent of the deformation pipeline: nothing here touches
// the tracer, the graph or the engine, and the embedded Gauss pair is a
// frozen table rather than the generated rules.

namespace pathfinder::oracle {

struct OracleResult {
    Complex value{};
    double error_estimate = 0.0; // sum of embedded-pair discrepancies at the final level
    long panels = 0;
};

/// Adaptive panel bisection along the straight segment z0 -> z1 with an
/// embedded 7/15-point Gauss pair. Guarded to desk scale: the sampled phase
/// variation times omega must stay below 1e6. Panel cap 2^20.
OracleResult adaptive_finite(const Amplitude& f, const ComplexPolynomial& g, double omega,
                             Complex z0, Complex z1, double tol);

/// Reference for contours with endpoints at (or snapped to) valleys: deforms
/// onto straight rays through the origin toward the valley angles, truncates
/// each ray once the integrand has decayed below the double-precision floor
/// and integrates the finite pieces with adaptive_finite. Finite endpoints
/// are joined to the origin by a straight segment.
OracleResult reference_infinite(const Amplitude& f, const ComplexPolynomial& g, double omega,
                                const Endpoint& a, const Endpoint& b, double tol);

/// Ai(x) by its Maclaurin series; usable for |x| <= 8 at double precision.
Complex airy_series(double x);

} // namespace pathfinder::oracle
