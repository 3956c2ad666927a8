#pragma once

#include <optional>
#include <vector>

#include "pathfinder/phase_geometry.hpp"

namespace pathfinder {

struct SDTerminal {
    enum class Kind { Entrance, Valley };
    Kind kind = Kind::Valley;
    int ball = -1;             // Entrance: ball index
    Complex point{};           // Entrance: fine-refined final point
    double valley_angle = 0.0; // Valley
};

/// Discretised steepest-descent contour from an origin eta, on the mesh
/// 0 = p_0 < p_1 < ... with points h_n satisfying g(h_n) = g(eta) + i p_n to
/// the coarse tolerance. Extending the mesh mutates the path; do it before
/// sharing across threads.
struct SDPath {
    Complex origin{};
    std::vector<double> mesh;
    std::vector<Complex> points;
    SDTerminal terminal;
    /// Set for linear phase: h(p) = origin + direction * p exactly, so the
    /// mesh is extended analytically instead of by stepping.
    std::optional<Complex> linear_direction;

    double p_max() const { return mesh.back(); }
    double arc_length() const;
};

struct TraceParams {
    double delta_ode = 0.1;
    double delta_coarse = 1e-2;
    double delta_fine = 1e-13;
};

/// Predictor-corrector SD trace from eta: forward Euler on h' = i/g'(h) with
/// the adaptive step delta_ode * min(2|g'|^2/|g''|, |g'| dist(h, stationary)),
/// followed by a Newton correction of g(h) = g(eta) + i p. Terminates on
/// entering a closed ball of the region (Entrance; final point re-refined to
/// delta_fine) or on entering a region of no return (Valley). The distance
/// guard uses all original stationary points, including removed ones.
SDPath trace(Complex eta, const PhaseContext& ctx, const NonOscRegion& region,
             const NoReturnData& data, const std::vector<Complex>& stationary_points,
             const TraceParams& params);

/// Point h(p) to fine tolerance: Newton on g(h) = g(origin) + i p with the
/// piecewise-linear interpolant of the traced mesh as the initial guess. If
/// p exceeds the traced mesh, the path is first extended by resuming the
/// tracing steps (without termination tests).
Complex refine_point(SDPath& path, double p, double delta_fine, const PhaseContext& ctx,
                     const std::vector<Complex>& stationary_points, const TraceParams& params);

} // namespace pathfinder
