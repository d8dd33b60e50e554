#include "padicnla/unipoly.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

UniPoly::UniPoly(std::vector<PadicScalar> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back().is_exact_zero()) c_.pop_back();
    prime();
}

UniPoly UniPoly::constant(const PadicScalar& c) {
    return UniPoly(std::vector<PadicScalar>{c});
}

UniPoly UniPoly::x_power(std::uint32_t p, std::size_t k, std::int64_t abs_prec) {
    std::vector<PadicScalar> c(k + 1, PadicScalar::zero(p));
    c[k] = PadicScalar::from_integer(p, 1, abs_prec);
    return UniPoly(std::move(c));
}

std::int64_t UniPoly::degree() const {
    for (std::size_t i = c_.size(); i > 0; --i)
        if (!c_[i - 1].is_zero_at_precision()) return static_cast<std::int64_t>(i - 1);
    return -1;
}

std::uint32_t UniPoly::prime() const {
    std::uint32_t p = 0;
    for (const auto& x : c_) {
        if (x.prime() == 0) continue;
        if (p == 0) p = x.prime();
        else if (p != x.prime())
            throw PrimeMismatch("polynomial mixes primes");
    }
    return p;
}

bool UniPoly::is_zero_at_precision() const {
    return degree() < 0;
}

const PadicScalar& UniPoly::leading() const {
    const std::int64_t d = degree();
    if (d < 0) throw PrecisionError("leading coefficient of a zero polynomial");
    return c_[static_cast<std::size_t>(d)];
}

bool UniPoly::is_monic_at_precision() const {
    const std::int64_t d = degree();
    if (d < 0) return false;
    const auto& l = c_[static_cast<std::size_t>(d)];
    return l.is_invertible_at_precision() && l.valuation() == 0 &&
           (l - PadicScalar::from_integer(l.prime(), 1, l.abs_precision()))
               .is_zero_at_precision();
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    std::vector<PadicScalar> r(std::max(c_.size(), o.c_.size()), PadicScalar::zero());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size()) r[i] = r[i] + c_[i];
        if (i < o.c_.size()) r[i] = r[i] + o.c_[i];
    }
    return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
    std::vector<PadicScalar> r(std::max(c_.size(), o.c_.size()), PadicScalar::zero());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size()) r[i] = r[i] + c_[i];
        if (i < o.c_.size()) r[i] = r[i] - o.c_[i];
    }
    return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
    if (c_.empty() || o.c_.empty()) return UniPoly();
    std::vector<PadicScalar> r(c_.size() + o.c_.size() - 1, PadicScalar::zero());
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::scale(const PadicScalar& s) const {
    std::vector<PadicScalar> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(x * s);
    return UniPoly(std::move(r));
}

UniPoly UniPoly::shift_x_power(std::size_t k) const {
    std::vector<PadicScalar> r(c_.size() + k, PadicScalar::zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::dilate(std::int64_t k) const {
    const std::int64_t d = degree();
    if (d < 0) return *this;
    std::vector<PadicScalar> r;
    r.reserve(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i)
        r.push_back(c_[i].mul_pow_p(k * (static_cast<std::int64_t>(i) - d)));
    return UniPoly(std::move(r));
}

PadicScalar UniPoly::eval(const PadicScalar& x) const {
    PadicScalar acc = PadicScalar::zero(x.prime());
    for (std::size_t i = c_.size(); i > 0; --i) acc = acc * x + c_[i - 1];
    return acc;
}

PadicMatrix UniPoly::eval(const PadicMatrix& m) const {
    if (m.rows() != m.cols()) throw InputError("polynomial of a non-square matrix");
    const std::uint32_t p = m.prime();
    const std::int64_t prec = std::min(m.min_abs_precision(), min_abs_precision());
    PadicMatrix acc(m.rows(), m.rows(), p);
    for (std::size_t i = c_.size(); i > 0; --i) {
        acc = acc * m;
        for (std::size_t k = 0; k < m.rows(); ++k)
            acc.at(k, k) = acc.at(k, k) + c_[i - 1];
    }
    (void)prec;
    return acc;
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& divisor) const {
    const std::int64_t dd = divisor.degree();
    if (dd < 0) throw PrecisionError("division by a polynomial that vanishes at precision");
    const PadicScalar lead_inv = divisor.leading().invert();
    std::vector<PadicScalar> rem = c_;
    std::vector<PadicScalar> quot;
    const std::int64_t dn = degree();
    if (dn < dd) return {UniPoly(), *this};
    quot.assign(static_cast<std::size_t>(dn - dd) + 1, PadicScalar::zero());
    for (std::int64_t i = dn; i >= dd; --i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        if (ui >= rem.size() || rem[ui].is_zero_at_precision()) continue;
        const PadicScalar q = rem[ui] * lead_inv;
        quot[static_cast<std::size_t>(i - dd)] = q;
        for (std::int64_t j = 0; j <= dd; ++j) {
            const std::size_t rj = static_cast<std::size_t>(i - dd + j);
            rem[rj] = rem[rj] - q * divisor.c_[static_cast<std::size_t>(j)];
        }
    }
    if (rem.size() > static_cast<std::size_t>(dd))
        rem.resize(static_cast<std::size_t>(dd) > 0 ? static_cast<std::size_t>(dd) : 0);
    return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::with_abs_precision(std::int64_t n) const {
    std::vector<PadicScalar> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(x.with_abs_precision(n));
    return UniPoly(std::move(r));
}

std::int64_t UniPoly::min_abs_precision() const {
    std::int64_t n = kInfValuation;
    for (const auto& x : c_) n = std::min(n, x.abs_precision());
    return n;
}

bool UniPoly::agrees(const UniPoly& o) const {
    const std::size_t n = std::max(c_.size(), o.c_.size());
    const PadicScalar z = PadicScalar::zero();
    for (std::size_t i = 0; i < n; ++i) {
        const PadicScalar& a = i < c_.size() ? c_[i] : z;
        const PadicScalar& b = i < o.c_.size() ? o.c_[i] : z;
        if (!a.agrees(b)) return false;
    }
    return true;
}

std::string UniPoly::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_exact_zero()) continue;
        if (!first) os << " + ";
        os << "(" << c_[i].to_string() << ")";
        if (i == 1) os << " X";
        else if (i > 1) os << " X^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

BezoutPair bezout_coprime(const UniPoly& a, const UniPoly& b) {
    // Extended Euclid over Q_p[X] with precision-tracked arithmetic.
    UniPoly r0 = a, r1 = b;
    const std::uint32_t p = a.prime() ? a.prime() : b.prime();
    const std::int64_t prec = std::min(a.min_abs_precision(), b.min_abs_precision());
    const PadicScalar one = PadicScalar::from_integer(p, 1, prec == kInfValuation ? 64 : prec);
    UniPoly u0 = UniPoly::constant(one), u1;
    UniPoly v0, v1 = UniPoly::constant(one);
    while (true) {
        if (r1.is_zero_at_precision())
            throw PrecisionError("bezout: remainder vanished at precision before reaching a "
                                 "constant gcd");
        if (r1.degree() == 0) break;
        const auto [quot, rem] = r0.divmod(r1);
        UniPoly r2 = rem;
        UniPoly u2 = u0 - quot * u1;
        UniPoly v2 = v0 - quot * v1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    const PadicScalar g_inv = r1.leading().invert();
    return BezoutPair{u1.scale(g_inv), v1.scale(g_inv)};
}

PadicScalar resultant(const UniPoly& a, const UniPoly& b) {
    const std::int64_t da = a.degree(), db = b.degree();
    if (da < 0 || db < 0) throw PrecisionError("resultant with a zero polynomial");
    const std::uint32_t p = a.prime() ? a.prime() : b.prime();
    const std::size_t n = static_cast<std::size_t>(da + db);
    if (n == 0) return PadicScalar::from_integer(p, 1, 64);
    PadicMatrix syl(n, n, p);
    for (std::size_t i = 0; i < static_cast<std::size_t>(db); ++i)
        for (std::int64_t j = 0; j <= da; ++j)
            syl.at(i, i + static_cast<std::size_t>(j)) =
                a[static_cast<std::size_t>(da - j)];
    for (std::size_t i = 0; i < static_cast<std::size_t>(da); ++i)
        for (std::int64_t j = 0; j <= db; ++j)
            syl.at(static_cast<std::size_t>(db) + i, i + static_cast<std::size_t>(j)) =
                b[static_cast<std::size_t>(db - j)];
    return determinant(syl);
}

} // namespace padic
