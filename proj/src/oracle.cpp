#include "pathfinder/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pathfinder/errors.hpp"

namespace pathfinder::oracle {

namespace {

// Frozen 7- and 15-point Gauss-Legendre pairs (nodes on [-1,1]).
constexpr double kNodes7[] = {
    -0.94910791234275852453, -0.74153118559939443986, -0.40584515137739716691,
    0.0,
    0.40584515137739716691, 0.74153118559939443986, 0.94910791234275852453};
constexpr double kWeights7[] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776,
    0.38183005050511894495, 0.27970539148927666790, 0.12948496616886969327};
constexpr double kNodes15[] = {
    -0.98799251802048542849, -0.93727339240070590431, -0.84820658341042721620,
    -0.72441773136017004742, -0.57097217260853884754, -0.39415134707756336990,
    -0.20119409399743452230, 0.0,
    0.20119409399743452230, 0.39415134707756336990, 0.57097217260853884754,
    0.72441773136017004742, 0.84820658341042721620, 0.93727339240070590431,
    0.98799251802048542849};
constexpr double kWeights15[] = {
    0.030753241996117268355, 0.070366047488108124709, 0.10715922046717193501,
    0.13957067792615431445, 0.16626920581699393355, 0.18616100001556221103,
    0.19843148532711157646, 0.20257824192556127288,
    0.19843148532711157646, 0.18616100001556221103, 0.16626920581699393355,
    0.13957067792615431445, 0.10715922046717193501, 0.070366047488108124709,
    0.030753241996117268355};

constexpr long kPanelCap = 1 << 20;

struct Integrand {
    const Amplitude& f;
    const ComplexPolynomial& g;
    double omega;
    Complex operator()(Complex z) const {
        return f(z) * std::exp(Complex(0.0, 1.0) * omega * g.eval(z));
    }
};

struct PanelEval {
    Complex high;
    double discrepancy;
    double noise_floor; // attainable discrepancy at double precision
};

PanelEval eval_panel(const Integrand& fn, Complex z0, Complex z1) {
    const Complex mid = 0.5 * (z0 + z1);
    const Complex half = 0.5 * (z1 - z0);
    Complex low(0.0), high(0.0);
    double noise = 0.0;
    for (int i = 0; i < 7; ++i)
        low += kWeights7[i] * fn(mid + half * kNodes7[i]);
    for (int i = 0; i < 15; ++i) {
        const Complex z = mid + half * kNodes15[i];
        const Complex value = fn(z);
        high += kWeights15[i] * value;
        // The oscillatory factor is evaluated with an absolute phase error of
        // order eps * omega * |g|, which bounds the achievable agreement.
        noise += kWeights15[i] * std::abs(value) * (4.0 + fn.omega * std::abs(fn.g.eval(z)));
    }
    low *= half;
    high *= half;
    const double eps = std::numeric_limits<double>::epsilon();
    return {high, std::abs(high - low), 8.0 * eps * std::abs(half) * noise};
}

} // namespace

OracleResult adaptive_finite(const Amplitude& f, const ComplexPolynomial& g, double omega,
                             Complex z0, Complex z1, double tol) {
    if (!(tol > 0.0))
        throw InputError("adaptive_finite: tol must be positive");
    if (z0 == z1)
        return {Complex(0.0), 0.0, 0};

    const Integrand fn{f, g, omega};
    {
        // Desk-scale guard on the oscillation budget.
        const Complex gmid = g.eval(0.5 * (z0 + z1));
        double variation = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const Complex z = z0 + (z1 - z0) * (i / 64.0);
            variation = std::max(variation, std::abs(g.eval(z) - gmid));
        }
        if (omega * variation > 1e6)
            throw InputError("adaptive_finite: phase variation exceeds the desk-scale guard");
    }

    const double total_length = std::abs(z1 - z0);
    struct Panel {
        Complex a, b;
    };
    std::vector<Panel> stack{{z0, z1}};
    OracleResult result;
    long processed = 0;
    while (!stack.empty()) {
        const Panel panel = stack.back();
        stack.pop_back();
        if (++processed > kPanelCap)
            throw NumericalError("adaptive_finite: oracle out of budget");
        const PanelEval pe = eval_panel(fn, panel.a, panel.b);
        const double share = std::abs(panel.b - panel.a) / total_length;
        if (pe.discrepancy <= std::max(tol * share, pe.noise_floor) ||
            std::abs(panel.b - panel.a) < 1e-14 * total_length) {
            result.value += pe.high;
            result.error_estimate += pe.discrepancy;
            ++result.panels;
        } else {
            const Complex mid = 0.5 * (panel.a + panel.b);
            stack.push_back({mid, panel.b});
            stack.push_back({panel.a, mid});
        }
    }
    return result;
}

namespace {

std::vector<double> valley_angles_of(const ComplexPolynomial& g) {
    const int degree = g.degree();
    const double lead_arg = std::arg(g.leading());
    std::vector<double> v(degree);
    for (int m = 1; m <= degree; ++m) {
        double t = ((2.0 * (m - 1) + 0.5) * std::numbers::pi - lead_arg) / degree;
        t = std::fmod(t, 2.0 * std::numbers::pi);
        if (t < 0.0)
            t += 2.0 * std::numbers::pi;
        v[m - 1] = t;
    }
    std::sort(v.begin(), v.end());
    return v;
}

double wrap_distance(double theta) {
    double t = std::fmod(theta, 2.0 * std::numbers::pi);
    if (t < 0.0)
        t += 2.0 * std::numbers::pi;
    return std::min(t, 2.0 * std::numbers::pi - t);
}

double snap_to_valley(double theta, const std::vector<double>& valleys, int degree) {
    double best = valleys[0];
    double best_dist = wrap_distance(theta - valleys[0]);
    for (double v : valleys) {
        const double d = wrap_distance(theta - v);
        if (d < best_dist) {
            best_dist = d;
            best = v;
        }
    }
    if (degree > 1 && best_dist > std::numbers::pi / (2.0 * degree) + 1e-9)
        throw InputError("reference_infinite: endpoint angle lies outside every valley sector");
    return best;
}

// Truncation radius along the valley-centre ray: far enough that the
// exponential factor is below the double-precision floor of the integrand.
double ray_truncation(const ComplexPolynomial& g, double omega, double angle) {
    double radius = 1.0;
    for (int it = 0; it < 4000; ++it) {
        const double decay = omega * g.eval(std::polar(radius, angle)).imag();
        if (decay > 45.0 + std::log1p(radius))
            return radius;
        radius *= 1.25;
        if (radius > 1e12)
            break;
    }
    throw NumericalError("reference_infinite: decay condition violated within budget");
}

} // namespace

OracleResult reference_infinite(const Amplitude& f, const ComplexPolynomial& g, double omega,
                                const Endpoint& a, const Endpoint& b, double tol) {
    const auto valleys = valley_angles_of(g);
    auto terminal_point = [&](const Endpoint& e) -> Complex {
        if (e.is_finite())
            return e.position;
        const double v = snap_to_valley(e.angle, valleys, g.degree());
        return std::polar(ray_truncation(g, omega, v), v);
    };
    // int_a^b = int_0^B - int_0^A through the origin.
    const Complex pa = terminal_point(a);
    const Complex pb = terminal_point(b);
    const OracleResult ia = adaptive_finite(f, g, omega, Complex(0.0), pa, 0.5 * tol);
    const OracleResult ib = adaptive_finite(f, g, omega, Complex(0.0), pb, 0.5 * tol);
    return {ib.value - ia.value, ia.error_estimate + ib.error_estimate, ia.panels + ib.panels};
}

Complex airy_series(double x) {
    if (std::abs(x) > 8.0)
        throw InputError("airy_series: |x| must not exceed 8");
    // Ai(x) = c1 F(x) - c2 G(x) with F'' = x F type recurrences and the two
    // standard constants expressed through the Gamma function.
    const double c1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double c2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    const double x3 = x * x * x;
    double sum_f = 1.0, term_f = 1.0;
    double sum_g = x, term_g = x;
    for (int k = 1; k < 200; ++k) {
        term_f *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        term_g *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        sum_f += term_f;
        sum_g += term_g;
        if (std::abs(term_f) < 1e-17 * std::abs(sum_f) && std::abs(term_g) < 1e-17 * (std::abs(sum_g) + 1e-300))
            break;
    }
    return Complex(c1 * sum_f - c2 * sum_g, 0.0);
}

} // namespace pathfinder::oracle
