#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padicnla/rational.hpp"

namespace padic {

/// An element of Q_p known to finite absolute precision.
///
/// Three states:
///   * nonzero:       value = unit * p^v + O(p^{v+rel}), with rel >= 1 known
///                    base-p digits of the unit (d_0 != 0, unit in [1, p^rel));
///   * apparent zero: value = O(p^N) — congruent to 0 modulo p^N but not known
///                    to vanish exactly (rel == 0, v == N);
///   * exact zero:    a distinguished value with valuation +infinity.
///
/// The absolute precision N_abs = v + rel: the value is known modulo p^{N_abs}.
/// All operations propagate precision pessimistically (add: min of absolute
/// precisions; mul: min(v_a + N_b, v_b + N_a)) so every emitted digit is
/// correct. Values are immutable after construction.
class PadicScalar {
public:
    /// Exact zero. p == 0 makes a prime-agnostic zero usable as an additive seed.
    static PadicScalar zero(std::uint32_t p = 0);

    /// O(p^n): zero at absolute precision n.
    static PadicScalar apparent_zero(std::uint32_t p, std::int64_t n);

    /// Integer embedded at absolute precision abs_prec.
    static PadicScalar from_integer(std::uint32_t p, const Integer& n, std::int64_t abs_prec);
    static PadicScalar from_integer(std::uint32_t p, long n, std::int64_t abs_prec);

    /// num/den embedded at absolute precision abs_prec (den coprime to p after
    /// cancelling the common p-power).
    static PadicScalar from_rational(std::uint32_t p, const Integer& num, const Integer& den,
                                     std::int64_t abs_prec);
    static PadicScalar from_rational(std::uint32_t p, const Rational& q, std::int64_t abs_prec);

    /// unit * p^v with rel known unit digits; canonicalizes (strips p-powers
    /// from the unit, reduces mod p^rel, collapses to an apparent zero).
    static PadicScalar from_unit(std::uint32_t p, std::int64_t v, const Integer& unit,
                                 std::int64_t rel);

    PadicScalar() : PadicScalar(zero()) {}

    std::uint32_t prime() const { return p_; }
    bool is_exact_zero() const { return exact_zero_; }
    /// Exact zero or apparent zero: indistinguishable from 0 at this precision.
    bool is_zero_at_precision() const { return exact_zero_ || rel_ == 0; }
    bool is_apparent_zero() const { return !exact_zero_ && rel_ == 0; }
    /// Has at least one known digit, i.e. can be inverted.
    bool is_invertible_at_precision() const { return !exact_zero_ && rel_ > 0; }

    /// Exact valuation; throws PrecisionError unless the value is known nonzero,
    /// kInfValuation for the exact zero.
    std::int64_t valuation() const;
    /// Total: exact v for nonzero, N_abs for apparent zeros, kInfValuation for 0.
    std::int64_t valuation_lower_bound() const;
    /// N_abs; kInfValuation for the exact zero.
    std::int64_t abs_precision() const;
    std::int64_t rel_precision() const { return rel_; }

    /// |x| = p^{-v}; 0 for the exact zero. For an apparent zero this is the
    /// certified upper bound p^{-N_abs}.
    Rational abs_value() const;

    /// The known representative unit * p^v as an exact rational (0 for zeros).
    Rational known_value() const;

    /// Representative of the value modulo p^N, as a rational in [0, p^N).
    /// Requires N <= N_abs.
    Rational residue_mod(std::int64_t n) const;

    /// Little-endian base-p digits of the unit (rel of them; empty for zeros).
    std::vector<std::uint32_t> digits() const;
    const Integer& unit() const { return unit_; }

    PadicScalar operator-() const;
    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator*(const PadicScalar& o) const;
    /// Multiplicative inverse; throws PrecisionError on (apparent) zero.
    PadicScalar invert() const;
    PadicScalar operator/(const PadicScalar& o) const { return *this * o.invert(); }

    /// Exact scaling by p^k: shifts the valuation, keeps every known digit.
    PadicScalar mul_pow_p(std::int64_t k) const;
    /// Multiplication by an exactly known integer/rational (no precision loss
    /// beyond the valuation shift).
    PadicScalar mul_exact(const Integer& n) const;
    PadicScalar mul_exact(const Rational& q) const;

    /// Caps the absolute precision at n (drops digits; never invents them).
    PadicScalar with_abs_precision(std::int64_t n) const;

    /// a ~ b mod p^{min(N_a, N_b)}: equal as far as both are known.
    bool agrees(const PadicScalar& o) const;
    /// a ~ b mod p^n (requires both known to precision >= n).
    bool agrees_mod(const PadicScalar& o, std::int64_t n) const;

    /// Structural equality: same state, valuation, digits and precision.
    bool operator==(const PadicScalar& o) const;
    bool operator!=(const PadicScalar& o) const { return !(*this == o); }

    /// Human form "...d2 d1 d0 x p^v (mod p^N)".
    std::string to_string() const;

private:
    PadicScalar(std::uint32_t p, bool exact_zero, std::int64_t v, Integer unit, std::int64_t rel)
        : p_(p), exact_zero_(exact_zero), v_(v), unit_(std::move(unit)), rel_(rel) {}

    static std::uint32_t merge_primes(const PadicScalar& a, const PadicScalar& b);

    std::uint32_t p_ = 0;
    bool exact_zero_ = true;
    std::int64_t v_ = 0;   // valuation of the known part; N_abs for apparent zeros
    Integer unit_ = 0;     // in [1, p^rel) with unit % p != 0 when rel > 0
    std::int64_t rel_ = 0; // number of known unit digits
};

} // namespace padic
