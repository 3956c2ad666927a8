#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pathfinder/errors.hpp"
#include "pathfinder/quadrature.hpp"

using namespace pathfinder;
using std::numbers::pi;

namespace {

const TraceParams kTrace{0.1, 1e-2, 1e-13};

SDPath linear_valley_path(Complex origin, Complex alpha1, double omega, double valley, int n) {
    SDPath p;
    p.origin = origin;
    const Complex direction = Complex(0, 1) / alpha1;
    const double extent = (4.0 * n + 20.0) / omega;
    p.mesh = {0.0, extent};
    p.points = {origin, origin + direction * extent};
    p.terminal = {SDTerminal::Kind::Valley, -1, Complex{}, valley};
    p.linear_direction = direction;
    return p;
}

} // namespace

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("gauss_legendre: N=1 and N=2") {
    const auto& r1 = gauss_legendre(1);
    REQUIRE(r1.nodes.size() == 1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    const auto& r2 = gauss_legendre(2);
    REQUIRE(r2.nodes.size() == 2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gauss_legendre: N=20 integrates t^38 to 2/39") {
    const auto& rule = gauss_legendre(20);
    double sum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * std::pow(rule.nodes[i], 38);
    CHECK(sum == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("gauss_laguerre: N=1 and N=2") {
    const auto& r1 = gauss_laguerre(1);
    REQUIRE(r1.nodes.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    const auto& r2 = gauss_laguerre(2);
    REQUIRE(r2.nodes.size() == 2);
    CHECK(r2.nodes[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r2.weights[0] == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-14));
    CHECK(r2.weights[1] == doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-14));
}

TEST_CASE("gauss_laguerre: N=30 integrates t^10 e^-t to 10!") {
    const auto& rule = gauss_laguerre(30);
    double sum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * std::pow(rule.nodes[i], 10);
    CHECK(sum == doctest::Approx(3628800.0).epsilon(1e-12));
}

TEST_CASE("rule exactness at degree 2N-1 and weight sums, N <= 60") {
    for (int n = 1; n <= 60; ++n) {
        const auto& leg = gauss_legendre(n);
        double wsum = 0.0, even = 0.0, odd = 0.0;
        for (int i = 0; i < n; ++i) {
            wsum += leg.weights[i];
            even += leg.weights[i] * std::pow(leg.nodes[i], 2 * n - 2);
            odd += leg.weights[i] * std::pow(leg.nodes[i], 2 * n - 1);
        }
        CHECK(std::abs(wsum - 2.0) <= 1e-13 * 2.0);
        CHECK(std::abs(even - 2.0 / (2 * n - 1)) <= 1e-13 * (2.0 / (2 * n - 1)));
        CHECK(std::abs(odd) <= 1e-13);

        const auto& lag = gauss_laguerre(n);
        double lsum = 0.0, moment = 0.0;
        for (int i = 0; i < n; ++i) {
            lsum += lag.weights[i];
            moment += lag.weights[i] * std::pow(lag.nodes[i], 2 * n - 1);
        }
        const double expected = std::exp(std::lgamma(2.0 * n)); // (2N-1)!
        CHECK(std::abs(lsum - 1.0) <= 1e-13);
        CHECK(std::abs(moment - expected) <= 1e-13 * expected);
    }
}

TEST_CASE("type1: linear phase closed form") {
    const double omega = 9.0;
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 1}), omega);
    const Complex z0(-1, 0), z1(1, 0);
    const int n = 1 + static_cast<int>(omega * std::abs(z1 - z0));
    const Complex got = type1(z0, z1, unit_amplitude(), ctx, n);
    const Complex iw(0, omega);
    const Complex expected = (std::exp(iw * z1) - std::exp(iw * z0)) / iw;
    CHECK(std::abs(got - expected) < 1e-12);
}

TEST_CASE("type1: zero-length segment") {
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 0, 1}), 3.0);
    CHECK(type1(Complex(0.3, 0.4), Complex(0.3, 0.4), unit_amplitude(), ctx, 7) == Complex(0.0));
}

TEST_CASE("type1: omega = 0 collapses to the plain Gauss rule") {
    // Engine requests require omega > 0; the quadrature formula itself is
    // well-defined at omega = 0 where the integrand is the amplitude alone.
    PhaseContext ctx;
    ctx.g = ComplexPolynomial({3, 5, 6, 2, 9});
    ctx.gp = ctx.g.derivative();
    ctx.gpp = ctx.gp.derivative();
    ctx.omega = 0.0;
    ctx.J = ctx.g.degree();
    const Complex got = type1(Complex(-1, 0), Complex(1, 0), unit_amplitude(), ctx, 1);
    CHECK(got.real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(got.imag() == 0.0);
}

TEST_CASE("type2_laguerre: linear phase is exact for every N") {
    const double omega = 3.0;
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 1}), omega);
    const std::vector<Complex> none;
    const RefineEnv env{ctx, none, kTrace};
    for (int n : {1, 2, 10}) {
        auto path = linear_valley_path(Complex(0, 0), Complex(1, 0), omega, pi / 2, n);
        const Complex got = type2_laguerre(path, unit_amplitude(), env, n, 1e-13);
        CHECK(std::abs(got - Complex(0, 1.0 / omega)) < 1e-14);
    }
}

TEST_CASE("type2_laguerre: z^2 ray against the erfc closed form") {
    const double omega = 10.0, c_ball = 2 * pi;
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 0, 1}), omega);
    const double r0 = std::sqrt(c_ball / omega);
    const Complex eta = std::polar(r0, pi / 4);
    const std::vector<Complex> stationary{Complex(0, 0)};
    NonOscRegion region;
    region.balls = {{Complex(0, 0), r0}};
    const auto data = no_return_threshold(ctx);
    auto path = trace(eta, ctx, region, data, stationary, kTrace);
    REQUIRE(path.terminal.kind == SDTerminal::Kind::Valley);

    const RefineEnv env{ctx, stationary, kTrace};
    const Complex got = type2_laguerre(path, unit_amplitude(), env, 30, 1e-13);
    // int_{r0}^{inf} e^{i w (t e^{i pi/4})^2} e^{i pi/4} dt = e^{i pi/4} sqrt(pi/w)/2 erfc(r0 sqrt(w))
    const Complex expected =
        std::polar(1.0, pi / 4) * 0.5 * std::sqrt(pi / omega) * std::erfc(r0 * std::sqrt(omega));
    CHECK(std::abs(got - expected) < 1e-10);
    // Prefactor magnitude at a ball-boundary origin is e^{-C_ball}.
    CHECK(std::abs(std::exp(Complex(0, 1) * omega * ctx.g.eval(eta))) ==
          doctest::Approx(std::exp(-c_ball)).epsilon(1e-12));
}

TEST_CASE("type2_legendre: linear phase, truncation at L = -log(delta_quad)") {
    const double omega = 3.0;
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 1}), omega);
    const std::vector<Complex> none;
    const RefineEnv env{ctx, none, kTrace};
    const double delta_quad = 1e-16;
    auto path = linear_valley_path(Complex(0, 0), Complex(1, 0), omega, pi / 2, 30);
    const Complex got =
        type2_legendre(path, unit_amplitude(), env, 30, delta_quad, /*log_m=*/0.0, 1e-13);
    CHECK(std::abs(got - Complex(0, 1.0 / omega)) < 1e-14 / omega);

    // Cross-agreement of the two Type 2 variants.
    auto path2 = linear_valley_path(Complex(0, 0), Complex(1, 0), omega, pi / 2, 30);
    const Complex lag = type2_laguerre(path2, unit_amplitude(), env, 30, 1e-13);
    CHECK(std::abs(got - lag) < 1e-12);

    // Coarser delta_quad leaves a truncation error of relative order delta_quad.
    const double coarse = 1e-4;
    auto path3 = linear_valley_path(Complex(0, 0), Complex(1, 0), omega, pi / 2, 30);
    const Complex truncated =
        type2_legendre(path3, unit_amplitude(), env, 30, coarse, /*log_m=*/0.0, 1e-13);
    const double rel = std::abs(truncated - Complex(0, 1.0 / omega)) * omega;
    CHECK(rel < 10 * coarse);
    CHECK(rel > 0.001 * coarse);
}

TEST_CASE("type3: full contour when L is huge; early truncation otherwise") {
    const double omega = 2.0;
    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 1}), omega);
    const std::vector<Complex> none;
    const RefineEnv env{ctx, none, kTrace};

    const double p_end = 1.5;
    auto make_entrance_path = [&] {
        SDPath p;
        p.origin = Complex(0, 0);
        p.mesh = {0.0, p_end};
        p.points = {Complex(0, 0), Complex(0, p_end)};
        p.terminal = {SDTerminal::Kind::Entrance, 0, Complex(0, p_end), 0.0};
        p.linear_direction = Complex(0, 1);
        return p;
    };

    // L huge: the quadrature covers the whole traced contour and the far
    // endpoint matches the refined entrance.
    auto path = make_entrance_path();
    const Complex got = type3(path, unit_amplitude(), env, 40, 1e-16, 0.0, 1e-13);
    const Complex expected = (std::exp(Complex(0, omega) * Complex(0, p_end)) - 1.0) / Complex(0, omega);
    CHECK(std::abs(got - expected) < 1e-13);
    const Complex far = refine_point(path, p_end, 1e-13, ctx, none, kTrace);
    CHECK(std::abs(far - path.terminal.point) < 1e-12);

    // L below omega * p_max: truncated early at L.
    auto path2 = make_entrance_path();
    const double delta_quad = std::exp(-1.0); // L = 1 < omega * p_end = 3
    const Complex truncated = type3(path2, unit_amplitude(), env, 40, delta_quad, 0.0, 1e-13);
    const Complex expected_truncated = Complex(0, 1) * (1.0 - std::exp(-1.0)) / omega;
    CHECK(std::abs(truncated - expected_truncated) < 1e-13);
}

TEST_CASE("type3: digits-of-pi exit-to-entrance contour against panel integration") {
    const ComplexPolynomial g({3, 5, 6, 2, 9, 5, 1, 4, 1, 3});
    const ComplexPolynomial amp_poly({2, 8, 1, 7, 2}); // 2z^4+7z^3+z^2+8z+2 ascending
    const Amplitude f = [&](Complex z) { return amp_poly.eval(z); };
    const double omega = 5.0;
    const auto ctx = PhaseContext::make(g, omega);
    const auto stationary = roots(ctx.gp);
    std::vector<NonOscBall> balls;
    for (const auto& xi : stationary)
        balls.push_back({xi, ball_radius(xi, ctx, 2 * pi, 16)});
    const auto region = amalgamate(balls, 1e-3 / (2.0 * std::max(ctx.J - 2, 1)));
    const auto ex = exits(region, ctx);
    const auto data = no_return_threshold(ctx);

    bool found = false;
    for (const auto& e : ex) {
        auto path = trace(e.location, ctx, region, data, stationary, kTrace);
        if (path.terminal.kind != SDTerminal::Kind::Entrance)
            continue;
        found = true;
        const RefineEnv env{ctx, stationary, kTrace};
        const Complex got = type3(path, f, env, 40, 1e-16, log(1.0), 1e-13);

        // Brute force along the refined contour: many Gauss-Legendre panels
        // on [0, omega p_max] in the rescaled variable.
        const double upper = omega * path.p_max();
        const auto& rule = gauss_legendre(20);
        const int panels = 200;
        Complex brute(0.0);
        for (int k = 0; k < panels; ++k) {
            const double a = upper * k / panels, b = upper * (k + 1) / panels;
            for (size_t m = 0; m < rule.nodes.size(); ++m) {
                const double pt = 0.5 * (b - a) * rule.nodes[m] + 0.5 * (a + b);
                const Complex h = refine_point(path, pt / omega, 1e-13, ctx, stationary, kTrace);
                brute += 0.5 * (b - a) * rule.weights[m] *
                         (Complex(0, 1) * f(h) / ctx.gp.eval(h)) * std::exp(-pt);
            }
        }
        brute *= std::exp(Complex(0, 1) * omega * ctx.g.eval(path.origin)) / omega;
        CHECK(std::abs(got - brute) < 1e-8);
    }
    CHECK(found); // omega = 5 produces at least one exit-to-entrance contour
}

TEST_CASE("contribution_scale examples") {
    // Chain of two vertices: a stationary point with g(xi) = 0 and a valley.
    Graph graph;
    graph.vertices = {{VertexKind::Stationary, Complex(0, 0), 0.0, 0},
                      {VertexKind::Valley, Complex{}, pi / 2, -1}};
    graph.edges = {{EdgeKind::BallLine, 0, 1, -1, 1.0}};
    QuasiSDDeformation def;
    def.edges = {{0, +1}};
    def.vertices = {0, 1};

    const auto ctx = PhaseContext::make(ComplexPolynomial({0, 0, 1}), 2.0); // g(0) = 0
    CHECK(contribution_scale(def, graph, ctx) == doctest::Approx(1.0).epsilon(1e-15));

    // Vertices sharing Im g = c give M = e^{-omega c}.
    const double c = -0.35, omega = 3.0;
    const auto ctx2 = PhaseContext::make(ComplexPolynomial({Complex(0, c), 0, 1}), omega);
    Graph graph2;
    graph2.vertices = {{VertexKind::FiniteEndpoint, Complex(0, 0), 0.0, -1},
                       {VertexKind::Exit, Complex(std::sqrt(0.5), 0), 0.0, 0}};
    // Im g = c at 0; at sqrt(0.5): g = 0.5 + ic -> Im also c.
    graph2.edges = {{EdgeKind::BallLine, 0, 1, -1, 1.0}};
    QuasiSDDeformation def2;
    def2.edges = {{0, +1}};
    def2.vertices = {0, 1};
    CHECK(contribution_scale(def2, graph2, ctx2) ==
          doctest::Approx(std::exp(-omega * c)).epsilon(1e-12));
}

TEST_CASE("assemble: a single ball-line deformation reproduces type1") {
    const auto ctx = PhaseContext::make(ComplexPolynomial({1, 2, 1}), 4.0);
    Graph graph;
    graph.vertices = {{VertexKind::FiniteEndpoint, Complex(-0.5, 0.1), 0.0, -1},
                      {VertexKind::FiniteEndpoint, Complex(0.7, -0.2), 0.0, -1}};
    graph.edges = {{EdgeKind::BallLine, 0, 1, -1, 0.0}};
    QuasiSDDeformation def;
    def.edges = {{0, +1}};
    def.vertices = {0, 1};
    std::vector<SDPath> paths;
    const std::vector<Complex> none;
    const RefineEnv env{ctx, none, kTrace};
    QuadratureOptions options;
    options.n = 25;
    const auto out = assemble(def, graph, paths, unit_amplitude(), env, options);
    const Complex direct =
        type1(Complex(-0.5, 0.1), Complex(0.7, -0.2), unit_amplitude(), ctx, 25);
    CHECK(out.value == direct);
    CHECK(out.n_total == 25);
    REQUIRE(out.contributions.size() == 1);
    CHECK(!out.contributions[0].skipped);
    CHECK(out.contributions[0].nodes.size() == 25);
}

TEST_SUITE_END();
