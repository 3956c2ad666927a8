#include "pathfinder/engine.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>

#include "pathfinder/errors.hpp"

namespace pathfinder {

namespace {

class StepClock {
public:
    explicit StepClock(std::vector<StepTiming>& out) : out_(out), last_(Clock::now()) {}
    void mark(const char* step) {
        const auto now = Clock::now();
        out_.push_back({step, std::chrono::duration<double>(now - last_).count()});
        last_ = now;
    }

private:
    using Clock = std::chrono::steady_clock;
    std::vector<StepTiming>& out_;
    Clock::time_point last_;
};

void require(bool condition, const char* message) {
    if (!condition)
        throw InputError(message);
}

QuadratureOptions make_options(const Parameters& params) {
    QuadratureOptions options;
    options.n = params.n;
    options.type2_rule = params.type2_rule;
    options.delta_quad = params.delta_quad;
    options.delta_fine = params.delta_fine;
    return options;
}

TraceParams make_trace_params(const Parameters& params) {
    return {params.delta_ode, params.delta_coarse, params.delta_fine};
}

int valley_vertex_for(const GraphVertexIds& ids, const PhaseContext& ctx, double angle) {
    for (size_t i = 0; i < ctx.valleys.size(); ++i)
        if (ctx.valleys[i] == angle)
            return ids.valleys[i];
    throw InputError("infinite endpoint angle is not a valley after snapping");
}

} // namespace

void Parameters::validate() const {
    require(c_ball > 0.0, "c_ball must be positive");
    require(n_ball >= 4, "n_ball must be at least 4");
    if (delta_ball)
        require(*delta_ball > 0.0 && *delta_ball < 1.0, "delta_ball must lie in (0,1)");
    require(delta_ode > 0.0 && delta_ode < 1.0, "delta_ode must lie in (0,1)");
    require(delta_coarse > 0.0 && delta_coarse < 1.0, "delta_coarse must lie in (0,1)");
    require(delta_fine > 0.0 && delta_fine < 1.0, "delta_fine must lie in (0,1)");
    require(delta_quad >= 0.0 && delta_quad < 1.0, "delta_quad must lie in [0,1)");
    require(delta_fine < delta_coarse, "delta_fine must be smaller than delta_coarse");
    require(n >= 1, "quadrature size n is required and must be >= 1");
}

double snap_infinite_endpoint(double theta, const PhaseContext& ctx) {
    if (std::isnan(theta))
        throw InputError("infinite endpoint angle is NaN");
    if (ctx.J == 1)
        return ctx.valleys[0];
    const double half_sector = std::numbers::pi / (2.0 * ctx.J);
    // Slack admits exact sector-boundary angles that round outside.
    const double slack = 1e-9;
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double v : ctx.valleys) {
        if (angular_distance(theta - v) <= half_sector + slack) {
            best = v;
            break; // valleys are sorted: the first hit is the smaller angle
        }
    }
    if (std::isnan(best))
        throw InputError("infinite endpoint angle lies outside every valley sector");
    return best;
}

std::optional<SmallOmegaPlan> small_omega_check(Complex a, Complex b, const PhaseContext& ctx,
                                                const Parameters& params) {
    const double ra = ball_radius(a, ctx, params.c_ball, params.n_ball);
    const double rb = ball_radius(b, ctx, params.c_ball, params.n_ball);
    if (std::abs(a - b) < ra + rb)
        return SmallOmegaPlan{ra, rb};
    return std::nullopt;
}

namespace {

EvaluationResult small_omega_evaluate(const EvaluationRequest& request, const PhaseContext& ctx,
                                      const SmallOmegaPlan& plan) {
    EvaluationResult result;
    result.diagnostics.branch = PipelineBranch::SmallOmega;
    result.valley_angles = ctx.valleys;
    result.region.balls = {{request.a.position, plan.radius_a}, {request.b.position, plan.radius_b}};

    result.graph.vertices = {{VertexKind::FiniteEndpoint, request.a.position, 0.0, -1},
                             {VertexKind::FiniteEndpoint, request.b.position, 0.0, -1}};
    result.graph.edges = {{EdgeKind::BallLine, 0, 1, -1, std::abs(request.b.position - request.a.position)}};
    result.graph.adjacency = {{0}, {0}};
    result.deformation.edges = {{0, +1}};
    result.deformation.vertices = {0, 1};

    const std::vector<Complex> no_stationary;
    const RefineEnv env{ctx, no_stationary, make_trace_params(request.params)};
    AssembleResult assembled =
        assemble(result.deformation, result.graph, result.paths, request.f, env, make_options(request.params));
    result.value = assembled.value;
    result.n_total = assembled.n_total;
    result.contributions = std::move(assembled.contributions);
    return result;
}

} // namespace

EvaluationResult linear_phase_evaluate(const EvaluationRequest& request) {
    request.params.validate();
    const PhaseContext ctx = PhaseContext::make(request.g, request.omega);
    if (ctx.J != 1)
        throw InputError("linear_phase_evaluate: phase degree must be 1");

    EvaluationResult result;
    result.diagnostics.branch = PipelineBranch::LinearPhase;
    result.valley_angles = ctx.valleys;
    const double valley = ctx.valleys[0];
    const Complex direction = Complex(0.0, 1.0) / ctx.g.coeff(1); // h(p) = eta + i p / alpha1

    std::vector<Complex> finite_endpoints;
    std::vector<TraceSource> sources;
    for (const Endpoint* e : {&request.a, &request.b}) {
        if (!e->is_finite())
            continue;
        const int index = static_cast<int>(finite_endpoints.size());
        finite_endpoints.push_back(e->position);
        SDPath path;
        path.origin = e->position;
        const double extent = (4.0 * request.params.n + 20.0) / ctx.omega;
        path.mesh = {0.0, extent};
        path.points = {e->position, e->position + direction * extent};
        path.terminal = {SDTerminal::Kind::Valley, -1, Complex{}, valley};
        path.linear_direction = direction;
        result.paths.push_back(std::move(path));
        sources.push_back({TraceSource::Kind::Endpoint, index});
    }

    GraphVertexIds ids;
    result.graph = build_graph(result.region, {}, finite_endpoints, ctx.valleys, result.paths, sources, &ids);
    auto vertex_of = [&](const Endpoint& e, int finite_slot) {
        return e.is_finite() ? ids.endpoints[finite_slot] : ids.valleys[0];
    };
    const int start = vertex_of(request.a, 0);
    const int end = vertex_of(request.b, request.a.is_finite() ? static_cast<int>(finite_endpoints.size()) - 1 : 0);

    result.deformation = shortest_path(result.graph, start, end);
    orient(result.deformation, result.graph, start);

    const std::vector<Complex> no_stationary;
    const RefineEnv env{ctx, no_stationary, make_trace_params(request.params)};
    AssembleResult assembled =
        assemble(result.deformation, result.graph, result.paths, request.f, env, make_options(request.params));
    result.value = assembled.value;
    result.n_total = assembled.n_total;
    result.contributions = std::move(assembled.contributions);
    return result;
}

EvaluationResult evaluate(const EvaluationRequest& request) {
    request.params.validate();
    const PhaseContext ctx = PhaseContext::make(request.g, request.omega);

    EvaluationRequest snapped = request;
    if (!snapped.a.is_finite())
        snapped.a.angle = snap_infinite_endpoint(snapped.a.angle, ctx);
    if (!snapped.b.is_finite())
        snapped.b.angle = snap_infinite_endpoint(snapped.b.angle, ctx);

    std::vector<StepTiming> timings;
    StepClock clock(timings);

    if (snapped.a.is_finite() && snapped.b.is_finite()) {
        if (const auto plan = small_omega_check(snapped.a.position, snapped.b.position, ctx, snapped.params)) {
            EvaluationResult result = small_omega_evaluate(snapped, ctx, *plan);
            clock.mark("small_omega");
            result.diagnostics.timings = std::move(timings);
            return result;
        }
        clock.mark("small_omega_check");
    }

    if (ctx.J == 1) {
        EvaluationResult result = linear_phase_evaluate(snapped);
        clock.mark("linear_phase");
        result.diagnostics.timings = std::move(timings);
        return result;
    }

    EvaluationResult result;
    result.valley_angles = ctx.valleys;

    result.stationary_points = roots(ctx.gp);
    clock.mark("stationary_points");

    std::vector<NonOscBall> balls;
    balls.reserve(result.stationary_points.size());
    for (const Complex& xi : result.stationary_points)
        balls.push_back({xi, ball_radius(xi, ctx, snapped.params.c_ball, snapped.params.n_ball)});
    clock.mark("ball_radii");

    result.region = amalgamate(balls, snapped.params.resolved_delta_ball(ctx.J));
    clock.mark("amalgamate");

    result.exit_points = exits(result.region, ctx);
    clock.mark("exits");

    const NoReturnData no_return = no_return_threshold(ctx);
    result.r_star = no_return.r_star;

    std::vector<Complex> finite_endpoints;
    if (snapped.a.is_finite())
        finite_endpoints.push_back(snapped.a.position);
    if (snapped.b.is_finite())
        finite_endpoints.push_back(snapped.b.position);

    const TraceParams trace_params = make_trace_params(snapped.params);
    std::vector<TraceSource> sources;
    for (size_t i = 0; i < result.exit_points.size(); ++i) {
        result.paths.push_back(trace(result.exit_points[i].location, ctx, result.region, no_return,
                                     result.stationary_points, trace_params));
        sources.push_back({TraceSource::Kind::Exit, static_cast<int>(i)});
    }
    for (size_t i = 0; i < finite_endpoints.size(); ++i) {
        if (result.region.contains(finite_endpoints[i]))
            continue; // interior endpoints join the deformation through ball lines
        result.paths.push_back(trace(finite_endpoints[i], ctx, result.region, no_return,
                                     result.stationary_points, trace_params));
        sources.push_back({TraceSource::Kind::Endpoint, static_cast<int>(i)});
    }
    clock.mark("traces");

    GraphVertexIds ids;
    result.graph = build_graph(result.region, result.exit_points, finite_endpoints, ctx.valleys,
                               result.paths, sources, &ids);
    clock.mark("graph");

    int endpoint_slot = 0;
    const int start = snapped.a.is_finite() ? ids.endpoints[endpoint_slot++]
                                            : valley_vertex_for(ids, ctx, snapped.a.angle);
    const int end = snapped.b.is_finite() ? ids.endpoints[endpoint_slot]
                                          : valley_vertex_for(ids, ctx, snapped.b.angle);

    result.deformation = shortest_path(result.graph, start, end);
    orient(result.deformation, result.graph, start);
    clock.mark("shortest_path");

    const RefineEnv env{ctx, result.stationary_points, trace_params};
    AssembleResult assembled =
        assemble(result.deformation, result.graph, result.paths, snapped.f, env, make_options(snapped.params));
    clock.mark("assemble");

    result.value = assembled.value;
    result.n_total = assembled.n_total;
    result.contributions = std::move(assembled.contributions);
    result.diagnostics.branch = PipelineBranch::Full;
    result.diagnostics.timings = std::move(timings);
    return result;
}

} // namespace pathfinder
