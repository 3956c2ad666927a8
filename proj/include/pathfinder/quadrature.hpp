#pragma once

#include <vector>

#include "pathfinder/amplitude.hpp"
#include "pathfinder/deformation_graph.hpp"
#include "pathfinder/phase_geometry.hpp"
#include "pathfinder/sd_tracer.hpp"

namespace pathfinder {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// N-point Gauss-Legendre rule on [-1,1]. Rules are built once and cached.
const QuadratureRule& gauss_legendre(int n);

/// N-point Gauss-Laguerre rule on [0,inf) with weight e^{-t}.
const QuadratureRule& gauss_laguerre(int n);

enum class Type2Rule { Laguerre, Legendre };

/// Everything point refinement needs: the phase, the full original
/// stationary-point set (removed ones included) and the tracing tolerances.
struct RefineEnv {
    const PhaseContext& ctx;
    const std::vector<Complex>& stationary;
    TraceParams trace;
};

/// Gauss-Legendre along the straight segment z0 -> z1.
Complex type1(Complex z0, Complex z1, const Amplitude& f, const PhaseContext& ctx, int n,
              std::vector<Complex>* nodes_out = nullptr);

/// Gauss-Laguerre along an SD contour to a valley, after the rescaling
/// p = p~/omega that maps the integral onto int_0^inf f~(p~) e^{-p~} dp~.
Complex type2_laguerre(SDPath& path, const Amplitude& f, const RefineEnv& env, int n,
                       double delta_fine, std::vector<Complex>* nodes_out = nullptr);

/// Truncated Gauss-Legendre variant for SD contours to a valley, cut at
/// L = -log(delta_quad * M / |e^{i omega g(eta)}|). log_m is log(M).
Complex type2_legendre(SDPath& path, const Amplitude& f, const RefineEnv& env, int n,
                       double delta_quad, double log_m, double delta_fine,
                       std::vector<Complex>* nodes_out = nullptr);

/// Truncated Gauss-Legendre for SD contours to an entrance; the truncation
/// point is min(omega * p_max, L) in rescaled units, so when the traced
/// contour is shorter than L the far end is the refined entrance itself.
Complex type3(SDPath& path, const Amplitude& f, const RefineEnv& env, int n, double delta_quad,
              double log_m, double delta_fine, std::vector<Complex>* nodes_out = nullptr);

/// max |e^{i omega g(xi)}| over the stationary/endpoint/exit vertices on the
/// chain, and its logarithm (used internally to avoid overflow).
double contribution_log_scale(const QuasiSDDeformation& deformation, const Graph& graph,
                              const PhaseContext& ctx);
double contribution_scale(const QuasiSDDeformation& deformation, const Graph& graph,
                          const PhaseContext& ctx);

struct ContourContribution {
    int edge = -1;
    Complex value{};
    bool skipped = false;
    int nodes_used = 0;
    std::vector<Complex> nodes; // quadrature node locations in the z-plane
};

struct QuadratureOptions {
    int n = 0;
    Type2Rule type2_rule = Type2Rule::Laguerre;
    double delta_quad = 1e-16;
    double delta_fine = 1e-13;
    bool record_nodes = true;
};

struct AssembleResult {
    Complex value{};
    long n_total = 0;
    std::vector<ContourContribution> contributions;
};

/// Evaluates every non-negligible contour of the deformation (Type 1 for
/// ball lines, Type 2 for SD-to-valley, Type 3 for SD-to-entrance) and sums
/// the signed contributions. A contour is skipped unless a finite endpoint
/// eta satisfies |e^{i omega g(eta)}|/M > delta_quad.
AssembleResult assemble(const QuasiSDDeformation& deformation, const Graph& graph,
                        std::vector<SDPath>& paths, const Amplitude& f, const RefineEnv& env,
                        const QuadratureOptions& options);

} // namespace pathfinder
