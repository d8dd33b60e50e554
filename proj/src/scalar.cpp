#include "padicnla/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

namespace {

Integer mod_pow(const Integer& n, std::uint32_t p, std::int64_t rel) {
    Integer m = qp::pow_ui(p, static_cast<std::uint64_t>(rel));
    Integer r;
    mpz_mod(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return r;
}

} // namespace

PadicScalar PadicScalar::zero(std::uint32_t p) {
    if (p != 0) qp::check_prime(p);
    return PadicScalar(p, true, 0, 0, 0);
}

PadicScalar PadicScalar::apparent_zero(std::uint32_t p, std::int64_t n) {
    qp::check_prime(p);
    return PadicScalar(p, false, n, 0, 0);
}

PadicScalar PadicScalar::from_unit(std::uint32_t p, std::int64_t v, const Integer& unit,
                                   std::int64_t rel) {
    qp::check_prime(p);
    if (rel <= 0) return apparent_zero(p, v + rel);
    Integer u = mod_pow(unit, p, rel);
    if (u == 0) return apparent_zero(p, v + rel);
    const std::int64_t w = qp::valuation(u, p);
    if (w >= rel) return apparent_zero(p, v + rel);
    if (w > 0) {
        Integer pw = qp::pow_ui(p, static_cast<std::uint64_t>(w));
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), pw.get_mpz_t());
        return PadicScalar(p, false, v + w, std::move(u), rel - w);
    }
    return PadicScalar(p, false, v, std::move(u), rel);
}

PadicScalar PadicScalar::from_integer(std::uint32_t p, const Integer& n, std::int64_t abs_prec) {
    qp::check_prime(p);
    if (n == 0) return zero(p);
    const std::int64_t v = qp::valuation(n, p);
    if (v >= abs_prec) return apparent_zero(p, abs_prec);
    Integer u = n;
    Integer pw = qp::pow_ui(p, static_cast<std::uint64_t>(v));
    mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), pw.get_mpz_t());
    return from_unit(p, v, u, abs_prec - v);
}

PadicScalar PadicScalar::from_integer(std::uint32_t p, long n, std::int64_t abs_prec) {
    return from_integer(p, Integer(n), abs_prec);
}

PadicScalar PadicScalar::from_rational(std::uint32_t p, const Integer& num, const Integer& den,
                                       std::int64_t abs_prec) {
    qp::check_prime(p);
    if (den == 0) throw InputError("rational with zero denominator");
    if (num == 0) return zero(p);
    const std::int64_t vn = qp::valuation(num, p);
    const std::int64_t vd = qp::valuation(den, p);
    const std::int64_t v = vn - vd;
    if (v >= abs_prec) return apparent_zero(p, abs_prec);
    Integer un = num, ud = den;
    Integer pwn = qp::pow_ui(p, static_cast<std::uint64_t>(vn));
    Integer pwd = qp::pow_ui(p, static_cast<std::uint64_t>(vd));
    mpz_divexact(un.get_mpz_t(), un.get_mpz_t(), pwn.get_mpz_t());
    mpz_divexact(ud.get_mpz_t(), ud.get_mpz_t(), pwd.get_mpz_t());
    const std::int64_t rel = abs_prec - v;
    Integer m = qp::pow_ui(p, static_cast<std::uint64_t>(rel));
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error("internal: unit denominator not invertible");
    return from_unit(p, v, un * inv, rel);
}

PadicScalar PadicScalar::from_rational(std::uint32_t p, const Rational& q, std::int64_t abs_prec) {
    return from_rational(p, q.get_num(), q.get_den(), abs_prec);
}

std::uint32_t PadicScalar::merge_primes(const PadicScalar& a, const PadicScalar& b) {
    if (a.p_ == 0) return b.p_;
    if (b.p_ == 0 || a.p_ == b.p_) return a.p_;
    throw PrimeMismatch("mixing Q_" + std::to_string(a.p_) + " and Q_" + std::to_string(b.p_));
}

std::int64_t PadicScalar::valuation() const {
    if (exact_zero_) return kInfValuation;
    if (rel_ == 0)
        throw PrecisionError("valuation undetermined: value is O(p^" + std::to_string(v_) + ")");
    return v_;
}

std::int64_t PadicScalar::valuation_lower_bound() const {
    return exact_zero_ ? kInfValuation : v_;
}

std::int64_t PadicScalar::abs_precision() const {
    return exact_zero_ ? kInfValuation : v_ + rel_;
}

Rational PadicScalar::abs_value() const {
    if (exact_zero_) return Rational(0);
    return qp::pow_p(p_, -valuation_lower_bound());
}

Rational PadicScalar::known_value() const {
    if (is_zero_at_precision()) return Rational(0);
    return Rational(unit_) * qp::pow_p(p_, v_);
}

Rational PadicScalar::residue_mod(std::int64_t n) const {
    if (abs_precision() < n)
        throw PrecisionError("residue mod p^" + std::to_string(n) + " exceeds known precision");
    if (is_zero_at_precision()) return Rational(0);
    if (v_ >= n) return Rational(0);
    const std::int64_t m = std::min<std::int64_t>(v_, 0);
    Integer scaled = unit_ * qp::pow_ui(p_, static_cast<std::uint64_t>(v_ - m));
    Integer modulus = qp::pow_ui(p_, static_cast<std::uint64_t>(n - m));
    Integer r;
    mpz_mod(r.get_mpz_t(), scaled.get_mpz_t(), modulus.get_mpz_t());
    return Rational(r) * qp::pow_p(p_, m);
}

std::vector<std::uint32_t> PadicScalar::digits() const {
    std::vector<std::uint32_t> d;
    d.reserve(static_cast<std::size_t>(rel_));
    Integer u = unit_;
    for (std::int64_t i = 0; i < rel_; ++i) {
        d.push_back(static_cast<std::uint32_t>(mpz_fdiv_ui(u.get_mpz_t(), p_)));
        mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_);
    }
    return d;
}

PadicScalar PadicScalar::operator-() const {
    if (exact_zero_ || rel_ == 0) return *this;
    Integer m = qp::pow_ui(p_, static_cast<std::uint64_t>(rel_));
    return PadicScalar(p_, false, v_, m - unit_, rel_);
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    const std::uint32_t p = merge_primes(*this, o);
    if (exact_zero_) return o;
    if (o.exact_zero_) return *this;
    const std::int64_t v = std::min(v_, o.v_);
    const std::int64_t n = std::min(abs_precision(), o.abs_precision());
    const std::int64_t rel = n - v;
    if (rel <= 0) return apparent_zero(p, n);
    Integer s = 0;
    if (rel_ > 0) s += unit_ * qp::pow_ui(p, static_cast<std::uint64_t>(v_ - v));
    if (o.rel_ > 0) s += o.unit_ * qp::pow_ui(p, static_cast<std::uint64_t>(o.v_ - v));
    return from_unit(p, v, s, rel);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
    return *this + (-o);
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    const std::uint32_t p = merge_primes(*this, o);
    if (exact_zero_ || o.exact_zero_) return zero(p);
    const std::int64_t v = v_ + o.v_;
    const std::int64_t rel = std::min(rel_, o.rel_);
    if (rel <= 0) return apparent_zero(p, v);
    return from_unit(p, v, unit_ * o.unit_, rel);
}

PadicScalar PadicScalar::invert() const {
    if (!is_invertible_at_precision())
        throw PrecisionError("inverting a value that is zero at the current precision");
    Integer m = qp::pow_ui(p_, static_cast<std::uint64_t>(rel_));
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error("internal: unit not invertible");
    return PadicScalar(p_, false, -v_, std::move(inv), rel_);
}

PadicScalar PadicScalar::mul_pow_p(std::int64_t k) const {
    if (exact_zero_) return *this;
    return PadicScalar(p_, false, v_ + k, unit_, rel_);
}

PadicScalar PadicScalar::mul_exact(const Integer& n) const {
    if (exact_zero_) return *this;
    if (n == 0) return zero(p_);
    const std::int64_t vn = qp::valuation(n, p_);
    if (rel_ == 0) return apparent_zero(p_, v_ + vn);
    Integer u = n;
    Integer pw = qp::pow_ui(p_, static_cast<std::uint64_t>(vn));
    mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), pw.get_mpz_t());
    return from_unit(p_, v_ + vn, unit_ * u, rel_);
}

PadicScalar PadicScalar::mul_exact(const Rational& q) const {
    if (exact_zero_) return *this;
    if (q == 0) return zero(p_);
    const std::int64_t vn = qp::valuation(q.get_num(), p_);
    const std::int64_t vd = qp::valuation(q.get_den(), p_);
    if (rel_ == 0) return apparent_zero(p_, v_ + vn - vd);
    Integer un = q.get_num(), ud = q.get_den();
    Integer pwn = qp::pow_ui(p_, static_cast<std::uint64_t>(vn));
    Integer pwd = qp::pow_ui(p_, static_cast<std::uint64_t>(vd));
    mpz_divexact(un.get_mpz_t(), un.get_mpz_t(), pwn.get_mpz_t());
    mpz_divexact(ud.get_mpz_t(), ud.get_mpz_t(), pwd.get_mpz_t());
    Integer m = qp::pow_ui(p_, static_cast<std::uint64_t>(rel_));
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error("internal: unit denominator not invertible");
    return from_unit(p_, v_ + vn - vd, unit_ * un * inv, rel_);
}

PadicScalar PadicScalar::with_abs_precision(std::int64_t n) const {
    if (exact_zero_) return *this;
    if (abs_precision() <= n) return *this;
    if (v_ >= n) return apparent_zero(p_, n);
    return from_unit(p_, v_, unit_, n - v_);
}

bool PadicScalar::agrees(const PadicScalar& o) const {
    return (*this - o).is_zero_at_precision();
}

bool PadicScalar::agrees_mod(const PadicScalar& o, std::int64_t n) const {
    const PadicScalar d = *this - o;
    if (d.abs_precision() < n)
        throw PrecisionError("agreement mod p^" + std::to_string(n) +
                             " undecidable at available precision");
    return d.valuation_lower_bound() >= n;
}

bool PadicScalar::operator==(const PadicScalar& o) const {
    if (exact_zero_ || o.exact_zero_) return exact_zero_ == o.exact_zero_;
    return p_ == o.p_ && v_ == o.v_ && rel_ == o.rel_ && unit_ == o.unit_;
}

std::string PadicScalar::to_string() const {
    if (exact_zero_) return "0";
    std::ostringstream os;
    if (rel_ == 0) {
        os << "O(" << p_ << "^" << v_ << ")";
        return os.str();
    }
    const auto d = digits();
    os << "...";
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
        os << *it;
        if (std::next(it) != d.rend()) os << " ";
    }
    os << " x " << p_ << "^" << v_ << " (mod " << p_ << "^" << abs_precision() << ")";
    return os.str();
}

} // namespace padic
