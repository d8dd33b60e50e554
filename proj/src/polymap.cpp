#include "padicnla/polymap.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace padic {

Poly Poly::constant(std::size_t nvars, const PadicScalar& c) {
    Poly r(nvars);
    r.add_term(Exps(nvars, 0), c);
    return r;
}

Poly Poly::variable(std::size_t nvars, std::size_t i, std::uint32_t p, std::int64_t abs_prec) {
    if (i >= nvars) throw InputError("variable index out of range");
    Poly r(nvars);
    Exps e(nvars, 0);
    e[i] = 1;
    r.add_term(e, PadicScalar::from_integer(p, 1, abs_prec));
    return r;
}

bool Poly::is_zero_at_precision() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_zero_at_precision(); });
}

std::int64_t Poly::total_degree() const {
    std::int64_t d = -1;
    for (const auto& [e, c] : terms_) {
        if (c.is_zero_at_precision()) continue;
        d = std::max(d, static_cast<std::int64_t>(
                            std::accumulate(e.begin(), e.end(), std::uint64_t{0})));
    }
    return d;
}

std::int64_t Poly::degree_in_block(std::size_t first, std::size_t count) const {
    std::int64_t d = -1;
    for (const auto& [e, c] : terms_) {
        if (c.is_zero_at_precision()) continue;
        std::uint64_t s = 0;
        for (std::size_t i = first; i < first + count && i < e.size(); ++i) s += e[i];
        d = std::max(d, static_cast<std::int64_t>(s));
    }
    return d;
}

std::uint32_t Poly::prime() const {
    std::uint32_t p = 0;
    for (const auto& [e, c] : terms_) {
        if (c.prime() == 0) continue;
        if (p == 0) p = c.prime();
        else if (p != c.prime())
            throw PrimeMismatch("polynomial mixes primes");
    }
    return p;
}

void Poly::add_term(const Exps& e, const PadicScalar& c) {
    if (e.size() != nvars_) throw InputError("exponent vector has the wrong arity");
    if (c.is_exact_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    PadicScalar s = it->second + c;
    if (s.is_exact_zero()) terms_.erase(it);
    else it->second = std::move(s);
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_) throw InputError("arity mismatch");
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    if (nvars_ != o.nvars_) throw InputError("arity mismatch");
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (nvars_ != o.nvars_) throw InputError("arity mismatch");
    Poly r(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Exps e(nvars_);
            for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Poly Poly::scale(const PadicScalar& c) const {
    Poly r(nvars_);
    if (c.is_exact_zero()) return r;
    for (const auto& [e, k] : terms_) r.add_term(e, k * c);
    return r;
}

Poly Poly::mul_exact(const Integer& n) const {
    Poly r(nvars_);
    if (n == 0) return r;
    for (const auto& [e, k] : terms_) r.add_term(e, k.mul_exact(n));
    return r;
}

PadicScalar Poly::eval(const std::vector<PadicScalar>& x) const {
    if (x.size() != nvars_) throw InputError("evaluation point has the wrong arity");
    // power tables per variable
    std::vector<std::vector<PadicScalar>> pows(nvars_);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] >= pows[i].size() && e[i] > 0) pows[i].resize(e[i] + 1);
    for (std::size_t i = 0; i < nvars_; ++i) {
        if (pows[i].empty()) continue;
        pows[i][0] = PadicScalar::zero(); // unused
        if (pows[i].size() > 1) pows[i][1] = x[i];
        for (std::size_t k = 2; k < pows[i].size(); ++k) pows[i][k] = pows[i][k - 1] * x[i];
    }
    PadicScalar acc = PadicScalar::zero();
    for (const auto& [e, c] : terms_) {
        PadicScalar t = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] > 0) t = t * pows[i][e[i]];
        acc = acc + t;
    }
    return acc;
}

Poly Poly::substitute(const std::vector<Poly>& subs) const {
    if (subs.size() != nvars_) throw InputError("substitution arity mismatch");
    const std::size_t m = subs.empty() ? 0 : subs[0].nvars();
    for (const auto& s : subs)
        if (s.nvars() != m) throw InputError("substitution polynomials disagree in arity");
    // power caches
    std::vector<std::vector<Poly>> pows(nvars_);
    Poly acc(m);
    for (const auto& [e, c] : terms_) {
        Poly t = Poly::constant(m, c);
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            auto& cache = pows[i];
            if (cache.empty()) cache.push_back(subs[i]); // cache[k] = subs[i]^{k+1}
            while (cache.size() < e[i]) cache.push_back(cache.back() * subs[i]);
            t = t * cache[e[i] - 1];
        }
        acc = acc + t;
    }
    return acc;
}

Poly Poly::partial(std::size_t i) const {
    if (i >= nvars_) throw InputError("partial derivative index out of range");
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exps e2 = e;
        e2[i] -= 1;
        r.add_term(e2, c.mul_exact(Integer(static_cast<unsigned long>(e[i]))));
    }
    return r;
}

Poly Poly::embed(std::size_t new_nvars, const std::vector<std::size_t>& map) const {
    if (map.size() != nvars_) throw InputError("embedding map arity mismatch");
    Poly r(new_nvars);
    for (const auto& [e, c] : terms_) {
        Exps e2(new_nvars, 0);
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (map[i] >= new_nvars) throw InputError("embedding target out of range");
            e2[map[i]] += e[i];
        }
        r.add_term(e2, c);
    }
    return r;
}

bool Poly::agrees(const Poly& o) const {
    if (nvars_ != o.nvars_) return false;
    const PadicScalar z = PadicScalar::zero();
    for (const auto& [e, c] : terms_) {
        auto it = o.terms_.find(e);
        if (!c.agrees(it == o.terms_.end() ? z : it->second)) return false;
    }
    for (const auto& [e, c] : o.terms_) {
        if (terms_.count(e)) continue;
        if (!c.agrees(z)) return false;
    }
    return true;
}

std::string Poly::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.to_string() << ")";
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            os << " x" << i;
            if (e[i] > 1) os << "^" << e[i];
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

PolyMap::PolyMap(std::size_t dim_in, std::size_t dim_out)
    : dim_in_(dim_in), coords_(dim_out, Poly(dim_in)) {}

PolyMap::PolyMap(std::vector<Poly> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw InputError("polynomial map needs at least one output");
    dim_in_ = coords_[0].nvars();
    for (const auto& c : coords_)
        if (c.nvars() != dim_in_) throw InputError("coordinates disagree in arity");
}

PolyMap PolyMap::identity(std::size_t n, std::uint32_t p, std::int64_t abs_prec) {
    std::vector<Poly> c;
    c.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.push_back(Poly::variable(n, i, p, abs_prec));
    return PolyMap(std::move(c));
}

PolyMap PolyMap::linear(const PadicMatrix& m, std::int64_t abs_prec) {
    std::vector<Poly> c;
    c.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Poly q(m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Poly::Exps e(m.cols(), 0);
            e[j] = 1;
            q.add_term(e, m.at(i, j).with_abs_precision(abs_prec));
        }
        c.push_back(std::move(q));
    }
    return PolyMap(std::move(c));
}

std::uint32_t PolyMap::prime() const {
    std::uint32_t p = 0;
    for (const auto& c : coords_) {
        const std::uint32_t q = c.prime();
        if (q == 0) continue;
        if (p == 0) p = q;
        else if (p != q)
            throw PrimeMismatch("map mixes primes");
    }
    return p;
}

std::int64_t PolyMap::total_degree() const {
    std::int64_t d = -1;
    for (const auto& c : coords_) d = std::max(d, c.total_degree());
    return d;
}

std::int64_t PolyMap::degree_in_block(std::size_t first, std::size_t count) const {
    std::int64_t d = -1;
    for (const auto& c : coords_) d = std::max(d, c.degree_in_block(first, count));
    return d;
}

PadicVector PolyMap::eval(const PadicVector& x) const {
    if (x.dim() != dim_in_) throw InputError("evaluation point has the wrong dimension");
    std::vector<PadicScalar> r;
    r.reserve(coords_.size());
    for (const auto& c : coords_) r.push_back(c.eval(x.entries()));
    return PadicVector(std::move(r));
}

PolyMap PolyMap::operator+(const PolyMap& o) const {
    if (dim_in_ != o.dim_in_ || dim_out() != o.dim_out())
        throw InputError("map shape mismatch");
    std::vector<Poly> c;
    c.reserve(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) c.push_back(coords_[i] + o.coords_[i]);
    return PolyMap(std::move(c));
}

PolyMap PolyMap::operator-(const PolyMap& o) const {
    if (dim_in_ != o.dim_in_ || dim_out() != o.dim_out())
        throw InputError("map shape mismatch");
    std::vector<Poly> c;
    c.reserve(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) c.push_back(coords_[i] - o.coords_[i]);
    return PolyMap(std::move(c));
}

PolyMap PolyMap::translate(const PadicVector& c) const {
    if (c.dim() != dim_in_) throw InputError("translation dimension mismatch");
    const std::uint32_t p = prime() ? prime() : c.prime();
    std::vector<Poly> subs;
    subs.reserve(dim_in_);
    for (std::size_t i = 0; i < dim_in_; ++i) {
        Poly s = Poly::variable(dim_in_, i, p, c[i].abs_precision() == kInfValuation
                                                   ? 64
                                                   : c[i].abs_precision());
        s.add_term(Poly::Exps(dim_in_, 0), c[i]);
        subs.push_back(std::move(s));
    }
    std::vector<Poly> out;
    out.reserve(coords_.size());
    for (const auto& q : coords_) out.push_back(q.substitute(subs));
    return PolyMap(std::move(out));
}

PadicVector PolyMap::constant_part() const {
    const std::uint32_t p = prime();
    std::vector<PadicScalar> r;
    r.reserve(coords_.size());
    const Poly::Exps zero_e(dim_in_, 0);
    for (const auto& c : coords_) {
        auto it = c.terms().find(zero_e);
        r.push_back(it == c.terms().end() ? PadicScalar::zero(p) : it->second);
    }
    return PadicVector(std::move(r));
}

PadicMatrix PolyMap::linear_part(std::int64_t abs_prec) const {
    const std::uint32_t p = prime();
    PadicMatrix m(coords_.size(), dim_in_, p);
    for (std::size_t i = 0; i < coords_.size(); ++i)
        for (std::size_t j = 0; j < dim_in_; ++j) {
            Poly::Exps e(dim_in_, 0);
            e[j] = 1;
            auto it = coords_[i].terms().find(e);
            if (it != coords_[i].terms().end())
                m.at(i, j) = it->second.with_abs_precision(abs_prec);
        }
    return m;
}

PolyMap PolyMap::subtract_linear(const PadicMatrix& a, std::int64_t abs_prec) const {
    return *this - PolyMap::linear(a, abs_prec);
}

PadicMatrix PolyMap::jacobian_block_at(const PadicVector& at, std::size_t first,
                                       std::size_t count) const {
    PadicMatrix m(coords_.size(), count, prime());
    for (std::size_t i = 0; i < coords_.size(); ++i)
        for (std::size_t j = 0; j < count; ++j)
            m.at(i, j) = coords_[i].partial(first + j).eval(at.entries());
    return m;
}

PolyMap PolyMap::compose(const PolyMap& g) const {
    if (dim_in_ != g.dim_out()) throw InputError("composition dimension mismatch");
    std::vector<Poly> subs;
    subs.reserve(g.dim_out());
    for (std::size_t i = 0; i < g.dim_out(); ++i) subs.push_back(g.coord(i));
    std::vector<Poly> out;
    out.reserve(coords_.size());
    for (const auto& q : coords_) out.push_back(q.substitute(subs));
    return PolyMap(std::move(out));
}

PolyMap PolyMap::conjugate(const PadicMatrix& m, const PadicMatrix& m_inv,
                           std::int64_t abs_prec) const {
    return PolyMap::linear(m_inv, abs_prec).compose(compose(PolyMap::linear(m, abs_prec)));
}

bool PolyMap::agrees(const PolyMap& o) const {
    if (dim_in_ != o.dim_in_ || dim_out() != o.dim_out()) return false;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (!coords_[i].agrees(o.coords_[i])) return false;
    return true;
}

std::string PolyMap::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        os << "f" << i << " = " << coords_[i].to_string() << "\n";
    return os.str();
}

} // namespace padic
