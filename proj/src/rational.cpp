#include "padicnla/rational.hpp"

namespace padic::qp {

Integer pow_ui(std::uint32_t p, std::uint64_t e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

Rational pow_p(std::uint32_t p, std::int64_t e) {
    if (e >= 0) return Rational(pow_ui(p, static_cast<std::uint64_t>(e)));
    Rational r(1, pow_ui(p, static_cast<std::uint64_t>(-e)));
    r.canonicalize();
    return r;
}

std::int64_t valuation(const Integer& n, std::uint32_t p) {
    if (n == 0) throw Error("valuation of zero integer");
    Integer m = abs(n);
    std::int64_t v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

std::int64_t floor_log_p(std::uint32_t p, const Rational& q) {
    if (q <= 0) throw Error("floor_log_p requires a positive rational");
    std::int64_t e = 0;
    Rational pw(1);
    if (q >= 1) {
        while (pw * p <= q) {
            pw *= p;
            ++e;
        }
        return e;
    }
    while (pw > q) {
        pw /= p;
        --e;
    }
    return e;
}

std::int64_t strict_val_threshold(std::uint32_t p, const Rational& r) {
    const std::int64_t e = floor_log_p(p, r);
    return (pow_p(p, e) == r) ? 1 - e : -e;
}

bool is_supported_prime(std::uint32_t p) {
    if (p < 2 || p >= (1u << 16)) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void check_prime(std::uint32_t p) {
    if (!is_supported_prime(p))
        throw InputError("p = " + std::to_string(p) + " is not a prime < 2^16");
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

} // namespace padic::qp
