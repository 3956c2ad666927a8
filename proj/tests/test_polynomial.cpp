#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "pathfinder/errors.hpp"
#include "pathfinder/polynomial.hpp"

using namespace pathfinder;

namespace {

// Digits-of-pi phase, ascending: 3 + 5z + 6z^2 + 2z^3 + 9z^4 + 5z^5 + z^6 + 4z^7 + z^8 + 3z^9.
ComplexPolynomial digits_of_pi_phase() {
    return ComplexPolynomial({3, 5, 6, 2, 9, 5, 1, 4, 1, 3});
}

ComplexPolynomial random_poly(std::mt19937& rng, int degree) {
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::vector<Complex> c(degree + 1);
    for (auto& x : c)
        x = std::polar(radius(rng), angle(rng));
    if (std::abs(c.back()) < 0.1)
        c.back() += Complex(0.5, 0.5); // keep the leading coefficient well away from zero
    return ComplexPolynomial(std::move(c));
}

} // namespace

TEST_SUITE_BEGIN("polynomial");

TEST_CASE("eval: identity polynomial") {
    ComplexPolynomial p({0, 1});
    CHECK(p.eval(Complex(3, 4)) == Complex(3, 4));
}

TEST_CASE("eval: constant term only contributes at z=0") {
    ComplexPolynomial p({1, 0, 0, 1.0 / 3.0});
    CHECK(p.eval(Complex(0, 0)) == Complex(1, 0));
}

TEST_CASE("eval: digits-of-pi coefficients sum to 39 at z=1") {
    CHECK(digits_of_pi_phase().eval(Complex(1, 0)).real() == doctest::Approx(39.0).epsilon(1e-15));
}

TEST_CASE("derivative: cubic and linear examples") {
    ComplexPolynomial cubic({0, 0, 0, 1.0 / 3.0});
    auto d = cubic.derivative();
    REQUIRE(d.degree() == 2);
    CHECK(d.coeff(2) == Complex(1, 0));
    CHECK(d.coeff(0) == Complex(0, 0));
    CHECK(d.coeff(1) == Complex(0, 0));

    const double c = 2.5;
    ComplexPolynomial airy_like({0, -c, 0, 1.0 / 3.0});
    auto da = airy_like.derivative();
    CHECK(da.coeff(0) == Complex(-c, 0));
    CHECK(da.coeff(1) == Complex(0, 0));
    CHECK(da.coeff(2) == Complex(1, 0));

    ComplexPolynomial linear({Complex(2, 1), Complex(0, -3)});
    auto dl = linear.derivative();
    CHECK(dl.degree() == 0);
    CHECK(dl.coeff(0) == Complex(0, -3));

    ComplexPolynomial constant({Complex(7, 0)});
    CHECK(constant.derivative().is_zero());
}

TEST_CASE("roots: plus/minus sqrt(c)") {
    auto r = roots(ComplexPolynomial({-4, 0, 1}));
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - Complex(-2, 0)) < 1e-12);
    CHECK(std::abs(r[1] - Complex(2, 0)) < 1e-12);
}

TEST_CASE("roots: double root at origin") {
    auto r = roots(ComplexPolynomial({0, 0, 1}));
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0]) < 1e-7);
    CHECK(std::abs(r[1]) < 1e-7);
}

TEST_CASE("roots: derivative of the digits-of-pi phase, residual check") {
    const auto p = digits_of_pi_phase().derivative();
    const auto r = roots(p);
    REQUIRE(r.size() == 8);
    for (const auto& root : r)
        CHECK(std::abs(p.eval(root)) < 1e-8 * p.coeff_scale() * std::pow(1.0 + std::abs(root), 8));
}

TEST_CASE("smallest_positive_real_root: simple quadratics") {
    auto r = smallest_positive_real_root({-4, 0, 1});
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(!smallest_positive_real_root({1, 0, 1}).has_value());
}

TEST_CASE("smallest_positive_real_root: monomial-phase ball equation") {
    // u(r) = omega^2 r^(2J) - C^2 has the root (C/omega)^(1/J).
    const double omega = 2.0, c = 5.0;
    const int J = 9;
    std::vector<double> u(2 * J + 1, 0.0);
    u[0] = -c * c;
    u[2 * J] = omega * omega;
    auto r = smallest_positive_real_root(u);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(std::pow(c / omega, 1.0 / J)).epsilon(1e-12));
}

TEST_CASE("Vieta invariants on random polynomials") {
    std::mt19937 rng(20240801);
    std::uniform_int_distribution<int> deg(2, 12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_poly(rng, deg(rng));
        const auto r = roots(p);
        Complex sum(0.0), prod(1.0);
        for (const auto& root : r) {
            sum += root;
            prod *= root;
        }
        const int J = p.degree();
        const Complex expected_sum = -p.coeff(J - 1) / p.coeff(J);
        const Complex expected_prod = (J % 2 == 0 ? 1.0 : -1.0) * p.coeff(0) / p.coeff(J);
        CHECK(std::abs(sum - expected_sum) <= 1e-8 * (1.0 + std::abs(expected_sum)));
        CHECK(std::abs(prod - expected_prod) <= 1e-8 * (1.0 + std::abs(expected_prod)));
    }
}

TEST_CASE("derivative matches central finite differences") {
    std::mt19937 rng(20240802);
    std::uniform_int_distribution<int> deg(1, 9);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    const double h = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_poly(rng, deg(rng));
        const auto dp = p.derivative();
        const Complex z(coord(rng), coord(rng));
        const Complex fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
        const Complex exact = dp.eval(z);
        CHECK(std::abs(fd - exact) <= 1e-4 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("taylor_shift reproduces shifted evaluations") {
    std::mt19937 rng(20240803);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const auto p = digits_of_pi_phase();
    const Complex center(0.3, -0.7);
    const auto q = p.taylor_shift(center);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex u(coord(rng), coord(rng));
        CHECK(std::abs(q.eval(u) - p.eval(center + u)) < 1e-10 * (1.0 + std::abs(p.eval(center + u))));
    }
}

TEST_CASE("normalization trims trailing zeros") {
    ComplexPolynomial p({1, 2, 0, 0});
    CHECK(p.degree() == 1);
    CHECK(p.leading() == Complex(2, 0));
}

TEST_SUITE_END();
