#include "pathfinder/phase_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pathfinder/errors.hpp"

namespace pathfinder {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_mod_2pi(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0)
        t += kTwoPi;
    return t;
}
} // namespace

PhaseContext PhaseContext::make(const ComplexPolynomial& g, double omega) {
    if (g.degree() < 1)
        throw InputError("phase must have degree >= 1");
    if (!(omega > 0.0))
        throw InputError("omega must be positive");
    PhaseContext ctx;
    ctx.g = g;
    ctx.gp = g.derivative();
    ctx.gpp = ctx.gp.derivative();
    ctx.omega = omega;
    ctx.J = g.degree();
    ctx.valleys = pathfinder::valleys(g);
    return ctx;
}

bool NonOscBall::contains(Complex z) const {
    return std::abs(z - center) <= radius;
}

bool NonOscRegion::contains(Complex z) const {
    return ball_containing(z) >= 0;
}

int NonOscRegion::ball_containing(Complex z) const {
    for (size_t i = 0; i < balls.size(); ++i)
        if (balls[i].contains(z))
            return static_cast<int>(i);
    return -1;
}

std::vector<double> valleys(const ComplexPolynomial& g) {
    const int J = g.degree();
    const double lead_arg = std::arg(g.leading());
    std::vector<double> v(J);
    for (int m = 1; m <= J; ++m)
        v[m - 1] = reduce_mod_2pi(((2.0 * (m - 1) + 0.5) * std::numbers::pi - lead_arg) / J);
    std::sort(v.begin(), v.end());
    return v;
}

double angular_distance(double theta) {
    const double t = reduce_mod_2pi(theta);
    return std::min(t, kTwoPi - t);
}

double ball_radius(Complex xi, const PhaseContext& ctx, double c_ball, int n_ball) {
    if (!(c_ball > 0.0) || n_ball < 4)
        throw InputError("ball_radius: require c_ball > 0 and n_ball >= 4");
    const ComplexPolynomial shifted = ctx.g.taylor_shift(xi); // g(xi + u)
    const int J = ctx.J;
    const double w2 = ctx.omega * ctx.omega;

    // The radius is the first crossing of the oscillation budget over the
    // sampled rays: the largest r for which no sampled ray has crossed yet.
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_ball; ++n) {
        const double theta = kTwoPi * n / n_ball;
        // a_k = b_k e^{i k theta}, k >= 1, so that g(xi+r e^{i theta})-g(xi)
        // = sum a_k r^k; then |.|^2 has real coefficients c_m = sum_k a_k
        // conj(a_{m-k}).
        std::vector<Complex> a(J + 1, Complex(0.0));
        for (int k = 1; k <= J; ++k)
            a[k] = shifted.coeff(k) * std::polar(1.0, k * theta);
        std::vector<double> u(2 * J + 1, 0.0);
        for (int m = 2; m <= 2 * J; ++m) {
            Complex cm(0.0);
            const int klo = std::max(1, m - J);
            const int khi = std::min(J, m - 1);
            for (int k = klo; k <= khi; ++k)
                cm += a[k] * std::conj(a[m - k]);
            u[m] = w2 * cm.real();
        }
        u[0] = -c_ball * c_ball;
        if (const auto r = smallest_positive_real_root(u))
            best = std::min(best, *r);
    }
    if (!std::isfinite(best))
        throw NumericalError("ball_radius: no ray crossing found (degenerate phase)");
    return best;
}

NonOscRegion amalgamate(const std::vector<NonOscBall>& balls, double delta_ball) {
    if (!(delta_ball > 0.0 && delta_ball < 1.0))
        throw InputError("amalgamate: delta_ball must lie in (0,1)");
    const int n = static_cast<int>(balls.size());
    std::vector<bool> active(n, true);
    std::vector<int> removed_order;
    int active_count = n;

    while (active_count > 1) {
        double dmin = std::numeric_limits<double>::infinity();
        int pi = -1, pj = -1;
        for (int i = 0; i < n; ++i) {
            if (!active[i])
                continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[j])
                    continue;
                const double d = std::abs(balls[i].center - balls[j].center) /
                                 std::max(balls[i].radius, balls[j].radius);
                if (d < dmin) {
                    dmin = d;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (!(dmin < delta_ball))
            break;
        int victim;
        if (balls[pi].radius < balls[pj].radius)
            victim = pi;
        else if (balls[pj].radius < balls[pi].radius)
            victim = pj;
        else
            victim = pj; // equal radii: remove the larger input index
        active[victim] = false;
        removed_order.push_back(victim);
        --active_count;
    }

    NonOscRegion region;
    std::vector<int> surviving_index(n, -1);
    for (int i = 0; i < n; ++i) {
        if (active[i]) {
            surviving_index[i] = static_cast<int>(region.balls.size());
            region.balls.push_back(balls[i]);
        }
    }
    for (int victim : removed_order) {
        // Covering ball: the survivor inside which the removed point lies
        // deepest (minimal |p - c| - r).
        int best = 0;
        double best_depth = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < region.balls.size(); ++k) {
            const double depth = std::abs(balls[victim].center - region.balls[k].center) - region.balls[k].radius;
            if (depth < best_depth) {
                best_depth = depth;
                best = static_cast<int>(k);
            }
        }
        region.removed.push_back({balls[victim].center, best});
    }
    return region;
}

namespace {

// -Im g and its second angular derivative on the circle xi + r e^{i theta}.
double boundary_height(const PhaseContext& ctx, Complex center, double r, double theta) {
    return -ctx.g.eval(center + std::polar(r, theta)).imag();
}

double boundary_second_deriv(const PhaseContext& ctx, Complex center, double r, double theta) {
    const Complex e = std::polar(1.0, theta);
    const Complex z = center + r * e;
    return (ctx.gpp.eval(z) * (r * r * e * e) + ctx.gp.eval(z) * (r * e)).imag();
}

} // namespace

std::vector<ExitPoint> exits(const NonOscRegion& region, const PhaseContext& ctx) {
    if (region.balls.empty())
        throw InputError("exits: region is empty");
    const int J = ctx.J;
    std::vector<ExitPoint> result;

    for (size_t bi = 0; bi < region.balls.size(); ++bi) {
        const Complex c = region.balls[bi].center;
        const double r = region.balls[bi].radius;

        // d/dtheta[-Im g] = -Re(g'(c + r s) r s) with s = e^{i theta}.
        // Multiplying by s^J clears the conjugate powers and yields a
        // degree-2J polynomial in s whose unit-circle roots are the critical
        // angles: sum_k e_k r^k s^{k+1+J} + sum_k conj(e_k) r^k s^{J-k-1}.
        const ComplexPolynomial gp_shift = ctx.gp.taylor_shift(c);
        std::vector<Complex> q(2 * J + 1, Complex(0.0));
        for (int k = 0; k <= J - 1; ++k) {
            const Complex ek = gp_shift.coeff(k) * std::pow(r, k);
            q[k + 1 + J] += ek;
            q[J - k - 1] += std::conj(ek);
        }
        const auto s_roots = roots(ComplexPolynomial(std::move(q)));

        std::vector<double> angles;
        for (const Complex& s : s_roots) {
            if (std::abs(std::abs(s) - 1.0) >= 1e-6)
                continue;
            const double theta = reduce_mod_2pi(std::arg(s));
            bool dup = false;
            for (double a : angles)
                if (angular_distance(theta - a) < 1e-7)
                    dup = true;
            if (!dup)
                angles.push_back(theta);
        }
        std::sort(angles.begin(), angles.end());

        size_t found_on_ball = 0;
        for (double theta : angles) {
            const Complex z = c + std::polar(r, theta);
            const double second = boundary_second_deriv(ctx, c, r, theta);
            const double scale = std::abs(ctx.gpp.eval(z)) * r * r + std::abs(ctx.gp.eval(z)) * r;
            bool is_min;
            if (std::abs(second) > 1e-9 * scale) {
                is_min = second > 0.0;
            } else {
                // Degenerate second derivative: classify by sampling.
                const double h = 1e-4;
                const double mid = boundary_height(ctx, c, r, theta);
                is_min = boundary_height(ctx, c, r, theta - h) >= mid &&
                         boundary_height(ctx, c, r, theta + h) >= mid;
            }
            if (!is_min)
                continue;
            ++found_on_ball;
            bool interior_elsewhere = false;
            for (size_t bj = 0; bj < region.balls.size(); ++bj) {
                if (bj == bi)
                    continue;
                if (std::abs(z - region.balls[bj].center) < region.balls[bj].radius) {
                    interior_elsewhere = true;
                    break;
                }
            }
            if (!interior_elsewhere)
                result.push_back({z, static_cast<int>(bi)});
        }
        if (found_on_ball == 0)
            throw NumericalError("exits: no boundary minimum found on a ball");
    }
    return result;
}

NoReturnData no_return_threshold(const PhaseContext& ctx) {
    const int J = ctx.J;
    if (J < 2)
        throw InputError("no_return_threshold: requires J >= 2");
    bool any_lower = false;
    std::vector<double> w(J, 0.0);
    for (int j = 1; j <= J - 1; ++j) {
        const double aj = std::abs(ctx.g.coeff(j));
        if (aj != 0.0)
            any_lower = true;
        w[j - 1] = -j * aj;
    }
    if (!any_lower)
        return {0.0};
    w[J - 1] = J * std::abs(ctx.g.leading()) / std::sqrt(2.0);
    const auto r = smallest_positive_real_root(w);
    if (!r)
        throw NumericalError("no_return_threshold: positive root not found");
    return {*r};
}

bool in_no_return_region(Complex z, double valley, const PhaseContext& ctx, const NoReturnData& data) {
    const double r = std::abs(z);
    if (r < data.r_star)
        return false;
    const int J = ctx.J;
    const double theta = angular_distance(std::arg(z) - valley);
    if (!(theta < std::numbers::pi / (2.0 * J)))
        return false;
    double G = J * std::abs(ctx.g.leading()) * std::pow(r, J - 1) *
               std::min(1.0 / std::sqrt(2.0), std::cos(J * theta));
    for (int j = 1; j <= J - 1; ++j)
        G -= j * std::abs(ctx.g.coeff(j)) * std::pow(r, j - 1);
    return G > 0.0;
}

} // namespace pathfinder
