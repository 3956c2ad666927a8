#pragma once

#include <vector>

#include "pathfinder/polynomial.hpp"

namespace pathfinder {

/// Shared evaluation environment: the phase, its first two derivatives, the
/// frequency, the degree J and the valley angles at infinity.
struct PhaseContext {
    ComplexPolynomial g;
    ComplexPolynomial gp;  // g'
    ComplexPolynomial gpp; // g''
    double omega = 1.0;
    int J = 1;
    std::vector<double> valleys; // sorted ascending in [0, 2*pi)

    static PhaseContext make(const ComplexPolynomial& g, double omega);
};

struct NonOscBall {
    Complex center;
    double radius = 0.0;
    bool contains(Complex z) const; // closed ball
};

struct RemovedPoint {
    Complex point;
    int covering_ball = -1; // index into NonOscRegion::balls
};

/// The surviving non-oscillatory balls after amalgamation, plus the removed
/// stationary points together with a surviving ball that covers each.
struct NonOscRegion {
    std::vector<NonOscBall> balls;
    std::vector<RemovedPoint> removed;

    bool contains(Complex z) const;
    /// Smallest index of a closed ball containing z, or -1.
    int ball_containing(Complex z) const;
};

struct ExitPoint {
    Complex location;
    int owner = -1; // ball index
};

struct NoReturnData {
    double r_star = 0.0;
};

/// Valley angles ((2(m-1)+1/2)*pi - arg(leading coeff))/J mod 2*pi, m=1..J,
/// sorted ascending.
std::vector<double> valleys(const ComplexPolynomial& g);

/// min over integers m of |theta - 2*pi*m|; result in [0, pi].
double angular_distance(double theta);

/// Ball radius at xi: the max over n_ball rays of the smallest positive root
/// of u_n(r) = omega^2 |g(xi + r e^{i 2 pi n / n_ball}) - g(xi)|^2 - c_ball^2,
/// a real polynomial in r of degree 2J. Throws NumericalError if no ray has a
/// positive root (degenerate phase).
double ball_radius(Complex xi, const PhaseContext& ctx, double c_ball, int n_ball);

/// Iteratively removes, from the pair realising the minimal scaled distance
/// d = |c1-c2|/max(r1,r2) below delta_ball, the member with the smaller
/// radius (ties: the larger input index), until min d >= delta_ball or one
/// ball remains.
NonOscRegion amalgamate(const std::vector<NonOscBall>& balls, double delta_ball);

/// Local minima of -Im g on each ball boundary, excluding points strictly
/// inside another ball.
std::vector<ExitPoint> exits(const NonOscRegion& region, const PhaseContext& ctx);

/// Positive solution r_* of J|a_J| r^{J-1}/sqrt(2) = sum_j j|a_j| r^{j-1},
/// or 0 when all lower-degree coefficients vanish.
NoReturnData no_return_threshold(const PhaseContext& ctx);

/// Membership test for the region of no return around valley v. Tests are
/// ordered: |z| >= r_*, then the angular sector, then the sign of G.
bool in_no_return_region(Complex z, double valley, const PhaseContext& ctx, const NoReturnData& data);

} // namespace pathfinder
