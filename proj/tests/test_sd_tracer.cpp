#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pathfinder/errors.hpp"
#include "pathfinder/sd_tracer.hpp"

using namespace pathfinder;
using std::numbers::pi;

namespace {

const TraceParams kDefaults{0.1, 1e-2, 1e-13};

// Fixture for g = z^2 at a given omega: single stationary point at 0.
struct SquareFixture {
    PhaseContext ctx;
    NonOscRegion region;
    NoReturnData data;
    std::vector<Complex> stationary{Complex(0, 0)};
    double r0;

    explicit SquareFixture(double omega, double c_ball = 2 * pi)
        : ctx(PhaseContext::make(ComplexPolynomial({0, 0, 1}), omega)) {
        r0 = std::sqrt(c_ball / omega);
        region.balls = {{Complex(0, 0), r0}};
        data = no_return_threshold(ctx);
    }
};

} // namespace

TEST_SUITE_BEGIN("sd_tracer");

TEST_CASE("trace: linear phase is a vertical ray to the valley") {
    // g = z has no stationary points; pass an artificial far-away one so the
    // step control stays finite.
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 1}), 1.0);
    NonOscRegion empty;
    const NoReturnData data{0.0};
    const std::vector<Complex> stationary{Complex(1e8, 1e8)};
    const auto path = trace(Complex(0, 0), ctx, empty, data, stationary, kDefaults);
    REQUIRE(path.terminal.kind == SDTerminal::Kind::Valley);
    CHECK(path.terminal.valley_angle == doctest::Approx(pi / 2));
    for (size_t i = 0; i < path.points.size(); ++i)
        CHECK(std::abs(path.points[i] - Complex(0, path.mesh[i])) < 1e-9 * (1 + path.mesh[i]));
}

TEST_CASE("trace: z^2 from an exit follows the closed form") {
    SquareFixture fx(4.0);
    const Complex eta = std::polar(fx.r0, pi / 4);
    auto path = trace(eta, fx.ctx, fx.region, fx.data, fx.stationary, kDefaults);
    REQUIRE(path.terminal.kind == SDTerminal::Kind::Valley);
    CHECK(path.terminal.valley_angle == doctest::Approx(pi / 4));
    for (size_t i = 0; i < path.points.size(); ++i) {
        const Complex exact = std::polar(1.0, pi / 4) * std::sqrt(fx.r0 * fx.r0 + path.mesh[i]);
        CHECK(std::abs(path.points[i] - exact) < 1e-6);
    }
}

TEST_CASE("refine_point: p=0 returns the origin exactly") {
    SquareFixture fx(4.0);
    const Complex eta = std::polar(fx.r0, pi / 4);
    auto path = trace(eta, fx.ctx, fx.region, fx.data, fx.stationary, kDefaults);
    CHECK(refine_point(path, 0.0, 1e-13, fx.ctx, fx.stationary, kDefaults) == eta);
}

TEST_CASE("refine_point: z^2 closed form to 1e-12, with extension") {
    SquareFixture fx(4.0);
    const Complex eta = std::polar(fx.r0, pi / 4);
    auto path = trace(eta, fx.ctx, fx.region, fx.data, fx.stationary, kDefaults);
    for (double p : {0.0001, 0.7, 3.0, 25.0, 400.0}) {
        const Complex h = refine_point(path, p, 1e-13, fx.ctx, fx.stationary, kDefaults);
        const Complex exact = std::polar(1.0, pi / 4) * std::sqrt(fx.r0 * fx.r0 + p);
        CHECK(std::abs(h - exact) < 1e-12 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("refine_point: linear path extends analytically") {
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 2.0}), 1.0);
    SDPath path;
    path.origin = Complex(1, 0);
    path.linear_direction = Complex(0, 1) / Complex(2.0, 0.0);
    path.mesh = {0.0, 1.0};
    path.points = {path.origin, path.origin + *path.linear_direction};
    path.terminal = {SDTerminal::Kind::Valley, -1, Complex{}, pi / 2};
    const std::vector<Complex> none;
    const Complex h = refine_point(path, 50.0, 1e-13, ctx, none, kDefaults);
    CHECK(std::abs(h - (Complex(1, 0) + Complex(0, 25.0))) < 1e-12);
}

TEST_CASE("trace: entrance into a ball for the order-2 saddle phase") {
    // Seventh-degree worked example whose ball at -i receives SD contours
    // from the balls above it.
    const ComplexPolynomial g({0.0,
                               Complex(63.0 / 1000.0, -77.0 / 2000.0),
                               Complex(237.0 / 800.0, -207.0 / 800.0),
                               Complex(711.0 / 2000.0, -4441.0 / 6000.0),
                               Complex(-4409.0 / 8000.0, -5077.0 / 8000.0),
                               Complex(-1047.0 / 2000.0, 543.0 / 1000.0),
                               Complex(7.0 / 20.0, 13.0 / 30.0),
                               Complex(1.0 / 7.0, 0.0)});
    const auto ctx = PhaseContext::make(g, 40.0);
    const auto stationary = roots(ctx.gp);
    REQUIRE(stationary.size() == 6);
    // Order-one point at -i; the order-2 point is the split pair near -0.2.
    int near_minus_i = 0, near_double = 0;
    for (const auto& xi : stationary) {
        if (std::abs(xi - Complex(0, -1)) < 1e-3)
            ++near_minus_i;
        if (std::abs(xi - Complex(-0.2, 0)) < 1e-3)
            ++near_double;
    }
    CHECK(near_minus_i == 1);
    CHECK(near_double == 2);

    std::vector<NonOscBall> balls;
    for (const auto& xi : stationary)
        balls.push_back({xi, ball_radius(xi, ctx, 2 * pi, 16)});
    const auto region = amalgamate(balls, 1e-3 / (2.0 * std::max(ctx.J - 2, 1)));
    CHECK(region.balls.size() == 5); // the split pair amalgamates

    const auto ex = exits(region, ctx);
    const auto data = no_return_threshold(ctx);
    int ball_minus_i = -1;
    for (size_t i = 0; i < region.balls.size(); ++i)
        if (std::abs(region.balls[i].center - Complex(0, -1)) < 1e-3)
            ball_minus_i = static_cast<int>(i);
    REQUIRE(ball_minus_i >= 0);

    int entrances_into_minus_i = 0;
    for (const auto& e : ex) {
        const auto path = trace(e.location, ctx, region, data, stationary, kDefaults);
        if (path.terminal.kind == SDTerminal::Kind::Entrance && path.terminal.ball == ball_minus_i)
            ++entrances_into_minus_i;
    }
    CHECK(entrances_into_minus_i == 2);
}

TEST_CASE("invariants: real part constant, descent exact, step bound") {
    SquareFixture fx(10.0);
    const Complex eta = std::polar(fx.r0, pi / 4);
    auto path = trace(eta, fx.ctx, fx.region, fx.data, fx.stationary, kDefaults);
    const double re0 = fx.ctx.g.eval(eta).real();
    const double im0 = fx.ctx.g.eval(eta).imag();
    const double delta_fine = 1e-13;
    for (double p : {0.05, 0.4, 2.0, 11.0}) {
        const Complex h = refine_point(path, p, delta_fine, fx.ctx, fx.stationary, kDefaults);
        const double gp_mag = std::abs(fx.ctx.gp.eval(h));
        CHECK(std::abs(fx.ctx.g.eval(h).real() - re0) <= 10 * delta_fine * (1.0 + gp_mag));
        CHECK(std::abs(fx.ctx.g.eval(h).imag() - im0 - p) <= 10 * delta_fine * (1.0 + gp_mag));
    }
    // Discrete step bound |h_{n+1}-h_n| <= delta_ode * dist(h_n, stationary).
    for (size_t i = 1; i < path.points.size(); ++i) {
        const double d = std::abs(path.points[i - 1]); // dist to the origin saddle
        CHECK(std::abs(path.points[i] - path.points[i - 1]) <= kDefaults.delta_ode * d * (1 + 1e-9));
    }
}

TEST_CASE("invariants: valley termination is permanent along the closed form") {
    SquareFixture fx(4.0);
    const Complex eta = std::polar(fx.r0, pi / 4);
    auto path = trace(eta, fx.ctx, fx.region, fx.data, fx.stationary, kDefaults);
    REQUIRE(path.terminal.kind == SDTerminal::Kind::Valley);
    const double v = path.terminal.valley_angle;
    const double p_end = path.p_max();
    for (int k = 1; k <= 50; ++k) {
        const double p = p_end * (1.0 + 0.7 * k);
        const Complex h = std::polar(1.0, pi / 4) * std::sqrt(fx.r0 * fx.r0 + p);
        CHECK(in_no_return_region(h, v, fx.ctx, fx.data));
    }
}

TEST_CASE("invariants: magnitude of the exponential is nonincreasing along a path") {
    SquareFixture fx(6.0);
    const Complex eta = std::polar(fx.r0, pi / 4);
    auto path = trace(eta, fx.ctx, fx.region, fx.data, fx.stationary, kDefaults);
    double prev = 1e300;
    for (const auto& h : path.points) {
        const double mag = -fx.ctx.omega * fx.ctx.g.eval(h).imag(); // log |e^{i w g}|
        CHECK(mag <= prev + 1e-8 * (1.0 + std::abs(prev)));
        prev = mag;
    }
}

TEST_CASE("trace: error when starting at a stationary point") {
    SquareFixture fx(4.0);
    CHECK_THROWS_AS(trace(Complex(0, 0), fx.ctx, fx.region, fx.data, fx.stationary, kDefaults),
                    NumericalError);
}

TEST_SUITE_END();
