#pragma once

#include <numbers>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "pathfinder/amplitude.hpp"
#include "pathfinder/deformation_graph.hpp"
#include "pathfinder/endpoint.hpp"
#include "pathfinder/quadrature.hpp"

namespace pathfinder {

struct Parameters {
    double c_ball = 2.0 * std::numbers::pi;
    int n_ball = 16;
    /// Defaults to 1e-3 / (2 * max(J-2, 1)), resolved against the phase degree.
    std::optional<double> delta_ball{};
    double delta_ode = 0.1;
    double delta_coarse = 1e-2;
    double delta_fine = 1e-13;
    double delta_quad = 1e-16;
    int n = 0; // quadrature points per contour; required
    Type2Rule type2_rule = Type2Rule::Laguerre;

    double resolved_delta_ball(int degree) const {
        return delta_ball ? *delta_ball : 1e-3 / (2.0 * std::max(degree - 2, 1));
    }
    void validate() const;
};

struct EvaluationRequest {
    Endpoint a;
    Endpoint b;
    Amplitude f = unit_amplitude();
    ComplexPolynomial g;
    double omega = 1.0;
    Parameters params;
};

enum class PipelineBranch { Full, SmallOmega, LinearPhase };

struct StepTiming {
    std::string step;
    double seconds;
};

struct Diagnostics {
    PipelineBranch branch = PipelineBranch::Full;
    std::vector<StepTiming> timings;
};

struct EvaluationResult {
    Complex value{};
    long n_total = 0;
    std::vector<ContourContribution> contributions;
    QuasiSDDeformation deformation;
    Graph graph;
    std::vector<SDPath> paths;
    NonOscRegion region;
    std::vector<Complex> stationary_points; // all roots of g', with multiplicity
    std::vector<ExitPoint> exit_points;
    std::vector<double> valley_angles;
    double r_star = 0.0;
    Diagnostics diagnostics;
};

/// Full pipeline: endpoint snapping, the small-omega and linear-phase
/// shortcuts, then stationary points, balls, exits, contour traces, graph,
/// shortest path and quadrature assembly. Deterministic for identical
/// requests.
EvaluationResult evaluate(const EvaluationRequest& request);

/// Valley angle whose closed sector [v - pi/(2J), v + pi/(2J)] contains
/// theta; the boundary belongs to both adjoining sectors and resolves to the
/// smaller angle. Throws InputError when theta lies outside every sector
/// (integrand growth direction) or is NaN. With J = 1 every angle maps to
/// the single valley.
double snap_infinite_endpoint(double theta, const PhaseContext& ctx);

struct SmallOmegaPlan {
    double radius_a = 0.0;
    double radius_b = 0.0;
};

/// Non-oscillatory balls around both (finite) endpoints; a plan is returned
/// iff the open balls overlap, in which case a single straight-line
/// Gauss-Legendre contour suffices.
std::optional<SmallOmegaPlan> small_omega_check(Complex a, Complex b, const PhaseContext& ctx,
                                                const Parameters& params);

/// Degree-1 phase: the SD contours are exact rays h(p) = eta + i p / alpha1,
/// so tracing is skipped and each finite endpoint contributes one Type 2
/// integral along its ray.
EvaluationResult linear_phase_evaluate(const EvaluationRequest& request);

} // namespace pathfinder
