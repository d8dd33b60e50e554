#pragma once

#include <utility>
#include <vector>

#include "padicnla/matrix.hpp"

namespace padic {

/// Univariate polynomial over Q_p, coefficients ascending (c[0] + c[1] X + ...).
/// Trailing exact zeros are trimmed; apparent zeros are kept because they carry
/// congruence information.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<PadicScalar> coeffs);
    static UniPoly constant(const PadicScalar& c);
    static UniPoly x_power(std::uint32_t p, std::size_t k, std::int64_t abs_prec);

    /// Degree as the index of the last coefficient that is not zero at
    /// precision; -1 for a polynomial that vanishes at precision.
    std::int64_t degree() const;
    std::size_t size() const { return c_.size(); }
    const PadicScalar& operator[](std::size_t i) const { return c_[i]; }
    const std::vector<PadicScalar>& coeffs() const { return c_; }
    std::uint32_t prime() const;

    bool is_zero_at_precision() const;
    /// Leading coefficient (of degree()); throws if zero at precision.
    const PadicScalar& leading() const;
    bool is_monic_at_precision() const;

    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator-(const UniPoly& o) const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly scale(const PadicScalar& c) const;
    UniPoly shift_x_power(std::size_t k) const; // multiply by X^k
    /// f(p^k X) * p^{-k deg f}: rescales roots by p^{-k}, stays monic if f is.
    UniPoly dilate(std::int64_t k) const;

    PadicScalar eval(const PadicScalar& x) const;
    PadicMatrix eval(const PadicMatrix& m) const;

    /// Euclidean division by a divisor with invertible leading coefficient;
    /// returns (quotient, remainder).
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& divisor) const;

    UniPoly with_abs_precision(std::int64_t n) const;
    std::int64_t min_abs_precision() const;
    bool agrees(const UniPoly& o) const;
    std::string to_string() const;

private:
    std::vector<PadicScalar> c_;
};

/// Bezout pair for polynomials with invertible-at-precision gcd = 1:
/// u a + v b = 1. Throws PrecisionError if the Euclid run degenerates,
/// CertificateError if the gcd has positive degree at precision.
struct BezoutPair {
    UniPoly u, v;
};
BezoutPair bezout_coprime(const UniPoly& a, const UniPoly& b);

/// Resultant via the Sylvester matrix determinant.
PadicScalar resultant(const UniPoly& a, const UniPoly& b);

} // namespace padic
