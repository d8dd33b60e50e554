#include "padicnla/vector.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

PadicVector::PadicVector(std::vector<PadicScalar> entries) : entries_(std::move(entries)) {
    prime(); // validates consistency
}

PadicVector::PadicVector(std::initializer_list<PadicScalar> entries)
    : PadicVector(std::vector<PadicScalar>(entries)) {}

PadicVector PadicVector::zero(std::uint32_t p, std::size_t dim) {
    return PadicVector(std::vector<PadicScalar>(dim, PadicScalar::zero(p)));
}

std::uint32_t PadicVector::prime() const {
    std::uint32_t p = 0;
    for (const auto& e : entries_) {
        if (e.prime() == 0) continue;
        if (p == 0) p = e.prime();
        else if (p != e.prime())
            throw PrimeMismatch("vector mixes primes");
    }
    return p;
}

Rational PadicVector::norm() const {
    Rational m(0);
    for (const auto& e : entries_) m = std::max(m, e.abs_value());
    return m;
}

std::int64_t PadicVector::valuation_lower_bound() const {
    std::int64_t v = kInfValuation;
    for (const auto& e : entries_) v = std::min(v, e.valuation_lower_bound());
    return v;
}

std::int64_t PadicVector::abs_precision() const {
    std::int64_t n = kInfValuation;
    for (const auto& e : entries_) n = std::min(n, e.abs_precision());
    return n;
}

bool PadicVector::is_zero_at_precision() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const PadicScalar& e) { return e.is_zero_at_precision(); });
}

PadicVector PadicVector::operator+(const PadicVector& o) const {
    if (dim() != o.dim()) throw InputError("vector dimension mismatch");
    std::vector<PadicScalar> r;
    r.reserve(dim());
    for (std::size_t i = 0; i < dim(); ++i) r.push_back(entries_[i] + o.entries_[i]);
    return PadicVector(std::move(r));
}

PadicVector PadicVector::operator-(const PadicVector& o) const {
    return *this + (-o);
}

PadicVector PadicVector::operator-() const {
    std::vector<PadicScalar> r;
    r.reserve(dim());
    for (const auto& e : entries_) r.push_back(-e);
    return PadicVector(std::move(r));
}

PadicVector PadicVector::scale(const PadicScalar& c) const {
    std::vector<PadicScalar> r;
    r.reserve(dim());
    for (const auto& e : entries_) r.push_back(e * c);
    return PadicVector(std::move(r));
}

PadicVector PadicVector::with_abs_precision(std::int64_t n) const {
    std::vector<PadicScalar> r;
    r.reserve(dim());
    for (const auto& e : entries_) r.push_back(e.with_abs_precision(n));
    return PadicVector(std::move(r));
}

bool PadicVector::agrees(const PadicVector& o) const {
    if (dim() != o.dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (!entries_[i].agrees(o.entries_[i])) return false;
    return true;
}

bool PadicVector::agrees_mod(const PadicVector& o, std::int64_t n) const {
    if (dim() != o.dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (!entries_[i].agrees_mod(o.entries_[i], n)) return false;
    return true;
}

std::string PadicVector::residue_key(std::int64_t n) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (i) os << ";";
        os << entries_[i].residue_mod(n).get_str();
    }
    return os.str();
}

std::string PadicVector::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < dim(); ++i) {
        if (i) os << ", ";
        os << entries_[i].to_string();
    }
    os << ")";
    return os.str();
}

bool Ball::contains(const PadicVector& y) const {
    if (y.dim() != dim()) throw InputError("ball/point dimension mismatch");
    const std::int64_t need = member_val_threshold();
    for (std::size_t i = 0; i < dim(); ++i) {
        const PadicScalar d = y[i] - center[i];
        if (d.is_exact_zero()) continue;
        if (d.is_apparent_zero()) {
            if (d.abs_precision() >= need) continue;
            throw PrecisionError("ball membership undecidable at available precision");
        }
        if (d.valuation() < need) return false;
    }
    return true;
}

Integer count_ball_residues(const Ball& b, std::int64_t n) {
    const std::uint32_t p = b.prime();
    const std::int64_t per_coord = n - b.member_val_threshold();
    if (per_coord <= 0) return 1;
    Integer c;
    mpz_ui_pow_ui(c.get_mpz_t(), p,
                  static_cast<std::uint64_t>(per_coord) * static_cast<std::uint64_t>(b.dim()));
    return c;
}

void for_each_ball_residue(const Ball& b, std::int64_t n,
                           const std::function<void(const PadicVector&)>& fn, std::uint64_t cap) {
    const std::uint32_t p = b.prime();
    if (p == 0) throw InputError("ball over undetermined prime");
    if (count_ball_residues(b, n) > Integer(static_cast<unsigned long>(cap)))
        throw CapExceeded("residue enumeration exceeds cap of " + std::to_string(cap) +
                          " points");
    const std::int64_t t = b.member_val_threshold();
    const std::int64_t per_coord = std::max<std::int64_t>(n - t, 0);
    Integer per;
    mpz_ui_pow_ui(per.get_mpz_t(), p, static_cast<std::uint64_t>(per_coord));
    const std::size_t d = b.dim();

    std::vector<Integer> idx(d, Integer(0));
    const Rational step = qp::pow_p(p, t); // offsets are step * k, k in [0, per)
    while (true) {
        std::vector<PadicScalar> coords;
        coords.reserve(d);
        for (std::size_t i = 0; i < d; ++i) {
            PadicScalar off = PadicScalar::from_rational(p, Rational(idx[i]) * step, n);
            PadicScalar rep = (b.center[i] + off).with_abs_precision(n);
            // the representative stands for a whole class: precision exactly n
            if (rep.is_exact_zero()) rep = PadicScalar::apparent_zero(p, n);
            coords.push_back(std::move(rep));
        }
        fn(PadicVector(std::move(coords)));
        // odometer, last coordinate fastest
        std::size_t i = d;
        while (i > 0) {
            --i;
            idx[i] += 1;
            if (idx[i] < per) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        if (d == 0) return;
    }
}

PadicVector ball_residue_by_index(const Ball& b, std::int64_t n, const Integer& index) {
    const std::uint32_t p = b.prime();
    const std::int64_t t = b.member_val_threshold();
    const std::int64_t per_coord = std::max<std::int64_t>(n - t, 0);
    Integer per;
    mpz_ui_pow_ui(per.get_mpz_t(), p, static_cast<std::uint64_t>(per_coord));
    const std::size_t d = b.dim();
    const Rational step = qp::pow_p(p, t);

    Integer rest = index;
    std::vector<Integer> idx(d);
    for (std::size_t c = d; c > 0; --c) { // last coordinate fastest
        Integer q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(), per.get_mpz_t());
        idx[c - 1] = r;
        rest = q;
    }
    std::vector<PadicScalar> coords;
    coords.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        PadicScalar off = PadicScalar::from_rational(p, Rational(idx[i]) * step, n);
        PadicScalar rep = (b.center[i] + off).with_abs_precision(n);
        if (rep.is_exact_zero()) rep = PadicScalar::apparent_zero(p, n);
        coords.push_back(std::move(rep));
    }
    return PadicVector(std::move(coords));
}

std::vector<PadicVector> enumerate_ball_residues(const Ball& b, std::int64_t n,
                                                 std::uint64_t cap) {
    std::vector<PadicVector> out;
    for_each_ball_residue(
        b, n, [&out](const PadicVector& v) { out.push_back(v); }, cap);
    return out;
}

} // namespace padic
