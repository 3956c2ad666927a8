#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace pathfinder {

using Complex = std::complex<double>;

/// Univariate polynomial with complex coefficients, stored in ascending
/// degree with trailing zero coefficients trimmed, so that the leading
/// coefficient of a nonzero polynomial is always nonzero.
class ComplexPolynomial {
public:
    ComplexPolynomial() : coeffs_{Complex(0.0)} {}
    explicit ComplexPolynomial(std::vector<Complex> ascending);

    /// Builds from coefficients given highest degree first (the order used
    /// on the command line and in most printed formulas).
    static ComplexPolynomial from_descending(std::vector<Complex> descending);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex(0.0); }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    /// Coefficient of z^j (zero beyond the degree).
    Complex coeff(int j) const {
        return (j >= 0 && j < static_cast<int>(coeffs_.size())) ? coeffs_[j] : Complex(0.0);
    }
    Complex leading() const { return coeffs_.back(); }

    /// Horner evaluation.
    Complex eval(Complex z) const;

    /// Term-by-term derivative. The derivative of a degree-0 polynomial is
    /// the zero polynomial (degenerate input, detectable via is_zero()).
    ComplexPolynomial derivative() const;

    /// Coefficients of p(center + u) as a polynomial in u.
    ComplexPolynomial taylor_shift(Complex center) const;

    double coeff_scale() const; // max |coeff|

private:
    std::vector<Complex> coeffs_;
};

/// All degree(p) complex roots, with multiplicity, by the eigenvalues of the
/// companion matrix followed by one Newton polishing step per root.
/// Clustered roots may carry reduced accuracy. Throws NumericalError if the
/// eigenvalue iteration fails to converge.
std::vector<Complex> roots(const ComplexPolynomial& p);

/// Smallest real root r with r > 0 of a real-coefficient polynomial given in
/// ascending order. Roots from the companion eigen-solve count as real when
/// |Im| < 1e-8 * (1 + |Re|). Falls back to a doubling/bisection bracket when
/// the eigen-solve is unstable; returns nullopt when no positive root is
/// found (bracket cap 2^60).
std::optional<double> smallest_positive_real_root(const std::vector<double>& ascending);

} // namespace pathfinder
