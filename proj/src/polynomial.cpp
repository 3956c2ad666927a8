#include "pathfinder/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "pathfinder/errors.hpp"

namespace pathfinder {

ComplexPolynomial::ComplexPolynomial(std::vector<Complex> ascending) : coeffs_(std::move(ascending)) {
    while (coeffs_.size() > 1 && coeffs_.back() == Complex(0.0))
        coeffs_.pop_back();
    if (coeffs_.empty())
        coeffs_.push_back(Complex(0.0));
}

ComplexPolynomial ComplexPolynomial::from_descending(std::vector<Complex> descending) {
    std::reverse(descending.begin(), descending.end());
    return ComplexPolynomial(std::move(descending));
}

Complex ComplexPolynomial::eval(Complex z) const {
    Complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
    if (degree() == 0)
        return ComplexPolynomial();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (size_t j = 1; j < coeffs_.size(); ++j)
        d[j - 1] = coeffs_[j] * static_cast<double>(j);
    return ComplexPolynomial(std::move(d));
}

ComplexPolynomial ComplexPolynomial::taylor_shift(Complex center) const {
    // Repeated synthetic division by (z - center); remainders are the
    // shifted coefficients in ascending order.
    const int n = degree();
    std::vector<Complex> t(coeffs_.rbegin(), coeffs_.rend()); // descending
    std::vector<Complex> shifted(n + 1);
    for (int i = 0; i <= n; ++i) {
        for (int j = 1; j <= n - i; ++j)
            t[j] += center * t[j - 1];
        shifted[i] = t[n - i];
    }
    return ComplexPolynomial(std::move(shifted));
}

double ComplexPolynomial::coeff_scale() const {
    double s = 0.0;
    for (const auto& c : coeffs_)
        s = std::max(s, std::abs(c));
    return s;
}

std::vector<Complex> roots(const ComplexPolynomial& p) {
    const int n = p.degree();
    if (n < 1)
        throw InputError("roots: polynomial must have degree >= 1");
    const auto& c = p.coeffs();
    if (n == 1)
        return {-c[0] / c[1]};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        companion(i, n - 1) = -c[i] / c[n];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("roots: companion eigenvalue iteration did not converge");

    const ComplexPolynomial dp = p.derivative();
    std::vector<Complex> out(n);
    for (int i = 0; i < n; ++i) {
        Complex r = solver.eigenvalues()(i);
        const Complex deriv = dp.eval(r);
        if (deriv != Complex(0.0)) {
            const Complex polished = r - p.eval(r) / deriv;
            if (std::isfinite(polished.real()) && std::isfinite(polished.imag()) &&
                std::abs(p.eval(polished)) <= std::abs(p.eval(r)))
                r = polished;
        }
        out[i] = r;
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

namespace {

double eval_real(const std::vector<double>& asc, double x) {
    double acc = asc.back();
    for (auto it = asc.rbegin() + 1; it != asc.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

double eval_real_deriv(const std::vector<double>& asc, double x) {
    const int n = static_cast<int>(asc.size()) - 1;
    double acc = asc[n] * n;
    for (int j = n - 1; j >= 1; --j)
        acc = acc * x + asc[j] * j;
    return acc;
}

std::optional<double> bisect_smallest(const std::vector<double>& asc) {
    const double f0 = eval_real(asc, 0.0);
    if (f0 == 0.0)
        return std::nullopt; // r = 0 is not a positive root; companion path handles interior roots
    double lo = 0.0, hi = 1.0;
    const double cap = std::ldexp(1.0, 60);
    while (true) {
        const double fhi = eval_real(asc, hi);
        if (std::isfinite(fhi) && fhi == 0.0)
            return hi;
        if (std::isfinite(fhi) && std::signbit(fhi) != std::signbit(f0))
            break;
        lo = hi;
        hi *= 2.0;
        if (hi > cap)
            return std::nullopt;
    }
    // Narrow to the first sign-change subinterval so the bisection lands on
    // the smallest root inside the bracket.
    const int scan = 64;
    double a = lo, b = hi;
    for (int i = 1; i <= scan; ++i) {
        const double x = lo + (hi - lo) * i / scan;
        const double fx = eval_real(asc, x);
        if (std::isfinite(fx) && std::signbit(fx) != std::signbit(f0)) {
            b = x;
            a = lo + (hi - lo) * (i - 1) / scan;
            break;
        }
    }
    double fa = eval_real(asc, a);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + b); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = eval_real(asc, m);
        if (fm == 0.0)
            return m;
        if (std::signbit(fm) == std::signbit(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::optional<double> smallest_positive_real_root(const std::vector<double>& ascending) {
    std::vector<double> asc = ascending;
    while (asc.size() > 1 && asc.back() == 0.0)
        asc.pop_back();
    const int n = static_cast<int>(asc.size()) - 1;
    if (n < 1)
        return std::nullopt;
    if (n == 1) {
        const double r = -asc[0] / asc[1];
        return r > 0.0 ? std::optional<double>(r) : std::nullopt;
    }

    bool solver_ok = true;
    std::vector<double> candidates;
    try {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i)
            companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i)
            companion(i, n - 1) = -asc[i] / asc[n];
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success) {
            solver_ok = false;
        } else {
            for (int i = 0; i < n; ++i) {
                const Complex ev = solver.eigenvalues()(i);
                if (std::abs(ev.imag()) < 1e-8 * (1.0 + std::abs(ev.real())) && ev.real() > 0.0)
                    candidates.push_back(ev.real());
            }
        }
    } catch (...) {
        solver_ok = false;
    }

    for (double& r : candidates) {
        for (int it = 0; it < 2; ++it) {
            const double d = eval_real_deriv(asc, r);
            if (d == 0.0)
                break;
            const double next = r - eval_real(asc, r) / d;
            if (!std::isfinite(next) || next <= 0.0 ||
                std::abs(eval_real(asc, next)) > std::abs(eval_real(asc, r)))
                break;
            r = next;
        }
    }

    // Backward error of the companion solve can fabricate real eigenvalues
    // far from any root (flat polynomials with extreme coefficient scales);
    // keep a candidate only when its residual is small against the
    // magnitude sum of the evaluation.
    std::vector<double> confirmed;
    for (double r : candidates) {
        double magnitude = 0.0, power = 1.0;
        for (double c : asc) {
            magnitude += std::abs(c) * power;
            power *= r;
        }
        if (std::abs(eval_real(asc, r)) <= 1e-8 * magnitude)
            confirmed.push_back(r);
    }

    if (!confirmed.empty())
        return *std::min_element(confirmed.begin(), confirmed.end());
    (void)solver_ok;
    // No trustworthy eigenvalue; a sign change can still exist under extreme
    // coefficient scaling.
    return bisect_smallest(asc);
}

} // namespace pathfinder
