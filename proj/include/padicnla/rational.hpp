#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "padicnla/errors.hpp"

namespace padic {

/// Exact rationals (gmp) back all norm and radius arithmetic; the value set of
/// the p-adic absolute value is p^Z and comparisons against it must be exact.
using Rational = mpq_class;
using Integer = mpz_class;

constexpr std::int64_t kInfValuation = INT64_MAX;

namespace qp {

/// p^e for e >= 0.
Integer pow_ui(std::uint32_t p, std::uint64_t e);

/// p^e as an exact rational, e of either sign.
Rational pow_p(std::uint32_t p, std::int64_t e);

/// p-adic valuation of a nonzero integer.
std::int64_t valuation(const Integer& n, std::uint32_t p);

/// Largest e with p^e <= q. Requires q > 0.
std::int64_t floor_log_p(std::uint32_t p, const Rational& q);

/// Smallest integer v with p^{-v} < r; membership in the strict ball of
/// radius r is v(x) >= this. Requires r > 0.
std::int64_t strict_val_threshold(std::uint32_t p, const Rational& r);

/// Trial-division primality for the supported range p < 2^16.
bool is_supported_prime(std::uint32_t p);

/// Throws InputError unless p is a supported prime.
void check_prime(std::uint32_t p);

std::string to_string(const Rational& q);

} // namespace qp
} // namespace padic
