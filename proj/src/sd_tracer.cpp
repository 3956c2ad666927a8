#include "pathfinder/sd_tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathfinder/errors.hpp"

namespace pathfinder {

namespace {

constexpr int kStepCap = 100000;
constexpr int kNewtonCap = 50;

double dist_to_stationary(Complex z, const std::vector<Complex>& stationary) {
    double d = std::numeric_limits<double>::infinity();
    for (const Complex& xi : stationary)
        d = std::min(d, std::abs(z - xi));
    return d;
}

// Newton iteration on g(h) = g(eta) + i p with p fixed. The stop tolerance
// is evaluated by `tol`, which sees the current iterate (the coarse stage
// scales it by the distance to the stationary points, the fine stage is
// absolute).
template <typename TolFn>
Complex newton_correct(Complex h, Complex g_eta, double p, const PhaseContext& ctx, TolFn tol) {
    bool converged = false;
    for (int it = 0; it < kNewtonCap; ++it) {
        const Complex gp = ctx.gp.eval(h);
        if (gp == Complex(0.0))
            throw NumericalError("sd_tracer: Newton hit a stationary point");
        const Complex step = (ctx.g.eval(h) - g_eta - Complex(0.0, p)) / gp;
        h -= step;
        if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
            throw NumericalError("sd_tracer: Newton iterate diverged");
        if (converged)
            return h; // one polishing step past the tolerance
        converged = std::abs(step) < tol(h);
    }
    if (converged)
        return h;
    throw NumericalError("sd_tracer: Newton corrector did not converge");
}

// One predictor-corrector step from (p, h); returns the new (p, h).
std::pair<double, Complex> advance(double p, Complex h, Complex g_eta, const PhaseContext& ctx,
                                   const std::vector<Complex>& stationary, const TraceParams& params) {
    const Complex gp = ctx.gp.eval(h);
    const double agp = std::abs(gp);
    if (agp == 0.0)
        throw NumericalError("sd_tracer: contour reached a stationary point");
    const double agpp = std::abs(ctx.gpp.eval(h));
    const double d = dist_to_stationary(h, stationary);
    const double stability = agpp > 0.0 ? 2.0 * agp * agp / agpp : std::numeric_limits<double>::infinity();
    const double dp = params.delta_ode * std::min(stability, agp * d);
    if (!(dp > 0.0) || !std::isfinite(dp))
        throw NumericalError("sd_tracer: step length collapsed");

    const double p_next = p + dp;
    const Complex predicted = h + dp * Complex(0.0, 1.0) / gp;
    const Complex corrected =
        newton_correct(predicted, g_eta, p_next, ctx, [&](Complex z) {
            return params.delta_coarse * dist_to_stationary(z, stationary);
        });
    return {p_next, corrected};
}

} // namespace

double SDPath::arc_length() const {
    double len = 0.0;
    for (size_t i = 1; i < points.size(); ++i)
        len += std::abs(points[i] - points[i - 1]);
    return len;
}

SDPath trace(Complex eta, const PhaseContext& ctx, const NonOscRegion& region,
             const NoReturnData& data, const std::vector<Complex>& stationary_points,
             const TraceParams& params) {
    if (ctx.gp.eval(eta) == Complex(0.0))
        throw NumericalError("trace: g'(eta) = 0 at the contour origin");

    SDPath path;
    path.origin = eta;
    path.mesh = {0.0};
    path.points = {eta};
    const Complex g_eta = ctx.g.eval(eta);

    double p = 0.0;
    Complex h = eta;
    for (int step = 0; step < kStepCap; ++step) {
        auto [p_next, h_next] = advance(p, h, g_eta, ctx, stationary_points, params);
        path.mesh.push_back(p_next);
        path.points.push_back(h_next);

        const int ball = region.ball_containing(h_next);
        if (ball >= 0) {
            const Complex refined = newton_correct(h_next, g_eta, p_next, ctx,
                                                   [&](Complex) { return params.delta_fine; });
            path.points.back() = refined;
            path.terminal = {SDTerminal::Kind::Entrance, ball, refined, 0.0};
            return path;
        }
        for (double v : ctx.valleys) {
            if (in_no_return_region(h_next, v, ctx, data)) {
                path.terminal = {SDTerminal::Kind::Valley, -1, Complex{}, v};
                return path;
            }
        }
        p = p_next;
        h = h_next;
    }
    throw NumericalError("trace: contour failed to terminate within the step cap");
}

namespace {

void extend_path(SDPath& path, double p_target, const PhaseContext& ctx,
                 const std::vector<Complex>& stationary, const TraceParams& params) {
    if (path.linear_direction) {
        path.mesh.push_back(p_target);
        path.points.push_back(path.origin + *path.linear_direction * p_target);
        return;
    }
    const Complex g_eta = ctx.g.eval(path.origin);
    double p = path.mesh.back();
    Complex h = path.points.back();
    for (int step = 0; step < kStepCap && p < p_target; ++step) {
        auto [p_next, h_next] = advance(p, h, g_eta, ctx, stationary, params);
        path.mesh.push_back(p_next);
        path.points.push_back(h_next);
        p = p_next;
        h = h_next;
    }
    if (p < p_target)
        throw NumericalError("refine_point: contour extension exceeded the step cap");
}

} // namespace

Complex refine_point(SDPath& path, double p, double delta_fine, const PhaseContext& ctx,
                     const std::vector<Complex>& stationary_points, const TraceParams& params) {
    if (p < 0.0)
        throw InputError("refine_point: p must be nonnegative");
    if (p == 0.0)
        return path.origin;
    if (p > path.p_max())
        extend_path(path, p, ctx, stationary_points, params);

    // Piecewise-linear initial guess on the traced mesh.
    const auto& mesh = path.mesh;
    const auto upper = std::lower_bound(mesh.begin(), mesh.end(), p);
    Complex guess;
    if (upper == mesh.begin()) {
        guess = path.points.front();
    } else if (upper == mesh.end()) {
        guess = path.points.back();
    } else {
        const size_t i = static_cast<size_t>(upper - mesh.begin());
        const double t = (p - mesh[i - 1]) / (mesh[i] - mesh[i - 1]);
        guess = path.points[i - 1] + t * (path.points[i] - path.points[i - 1]);
    }

    const Complex g_eta = ctx.g.eval(path.origin);
    return newton_correct(guess, g_eta, p, ctx, [&](Complex) { return delta_fine; });
}

} // namespace pathfinder
