#include "padicnla/calculus.hpp"

#include <algorithm>

namespace padic {

ExtendedTriple make_triple(PadicVector x, PadicVector y, PadicScalar t) {
    if (x.dim() != y.dim()) throw InputError("triple dimensions disagree");
    return ExtendedTriple{std::move(x), std::move(y), std::move(t), false};
}

ExtendedTriple make_triple_in(const Ball& domain, PadicVector x, PadicVector y, PadicScalar t) {
    ExtendedTriple tr = make_triple(std::move(x), std::move(y), std::move(t));
    if (!domain.contains(tr.x) || !domain.contains(tr.x + tr.y.scale(tr.t)))
        throw InputError("triple (x, y, t) leaves the domain: x + t y must stay inside");
    tr.domain_checked = true;
    return tr;
}

PolyMap extended_map(const PolyMap& f) {
    const std::size_t n = f.dim_in();
    const std::size_t nv = 2 * n + 1; // x_0..x_{n-1}, y_0..y_{n-1}, t
    std::vector<Poly> out;
    out.reserve(f.dim_out());
    for (std::size_t ci = 0; ci < f.dim_out(); ++ci) {
        Poly h(nv);
        for (const auto& [e, c] : f.coord(ci).terms()) {
            // expand c * prod_i (x_i + t y_i)^{e_i}, drop the k = 0 term and
            // divide by t (shift the t exponent down by one)
            std::vector<std::uint32_t> k(n, 0);
            while (true) {
                // advance odometer; the all-zero choice is skipped below
                std::size_t i = 0;
                while (i < n) {
                    if (k[i] < e[i]) {
                        ++k[i];
                        break;
                    }
                    k[i] = 0;
                    ++i;
                }
                if (i == n) break; // wrapped: enumeration done
                Integer binom(1);
                std::uint64_t tdeg = 0;
                Poly::Exps ex(nv, 0);
                for (std::size_t j = 0; j < n; ++j) {
                    ex[j] = e[j] - k[j];
                    ex[n + j] = k[j];
                    tdeg += k[j];
                    if (k[j] > 0) {
                        Integer b;
                        mpz_bin_uiui(b.get_mpz_t(), e[j], k[j]);
                        binom *= b;
                    }
                }
                ex[2 * n] = static_cast<std::uint32_t>(tdeg - 1);
                h.add_term(ex, c.mul_exact(binom));
            }
        }
        out.push_back(std::move(h));
    }
    return PolyMap(std::move(out));
}

PadicVector literal_quotient(const PolyMap& f, const PadicVector& x, const PadicVector& y,
                             const PadicScalar& t) {
    if (!t.is_invertible_at_precision())
        throw PrecisionError("literal quotient requires t invertible at precision");
    const PadicVector fx = f.eval(x);
    const PadicVector fxty = f.eval(x + y.scale(t));
    return (fxty - fx).scale(t.invert());
}

namespace {

PadicVector eval_extended(const PolyMap& h, const PadicVector& x, const PadicVector& y,
                          const PadicScalar& t) {
    std::vector<PadicScalar> args;
    args.reserve(h.dim_in());
    for (const auto& e : x.entries()) args.push_back(e);
    for (const auto& e : y.entries()) args.push_back(e);
    args.push_back(t);
    return h.eval(PadicVector(std::move(args)));
}

} // namespace

PadicVector difference_quotient(const PolyMap& f, const ExtendedTriple& triple) {
    if (triple.t.is_invertible_at_precision())
        return literal_quotient(f, triple.x, triple.y, triple.t);
    return eval_extended(extended_map(f), triple.x, triple.y, triple.t);
}

PadicVector directional_derivative(const PolyMap& f, const PadicVector& x,
                                   const PadicVector& y) {
    const std::uint32_t p = f.prime() ? f.prime() : x.prime();
    return eval_extended(extended_map(f), x, y, PadicScalar::zero(p));
}

PolyMap directional_derivative_map(const PolyMap& f, const PadicVector& y) {
    if (y.dim() != f.dim_in()) throw InputError("direction dimension mismatch");
    std::vector<Poly> out;
    out.reserve(f.dim_out());
    for (std::size_t ci = 0; ci < f.dim_out(); ++ci) {
        Poly acc(f.dim_in());
        for (std::size_t i = 0; i < f.dim_in(); ++i)
            acc = acc + f.coord(ci).partial(i).scale(y[i]);
        out.push_back(std::move(acc));
    }
    return PolyMap(std::move(out));
}

PadicVector iterated_derivative(const PolyMap& f, const PadicVector& x,
                                const std::vector<PadicVector>& directions) {
    if (directions.empty()) throw InputError("iterated derivative needs j >= 1");
    PolyMap g = f;
    for (const auto& y : directions) g = directional_derivative_map(g, y);
    return g.eval(x);
}

TaylorData taylor_data(const PolyMap& f, const PadicVector& x, const PadicVector& y,
                       std::size_t k) {
    const std::size_t n = f.dim_in();
    if (x.dim() != n || y.dim() != n) throw InputError("taylor point dimension mismatch");
    const std::uint32_t p = f.prime() ? f.prime() : x.prime();
    // max term degree including apparently-zero coefficients
    std::size_t dmax = 0;
    for (std::size_t ci = 0; ci < f.dim_out(); ++ci)
        for (const auto& [e, c] : f.coord(ci).terms()) {
            std::size_t deg = 0;
            for (auto ei : e) deg += ei;
            dmax = std::max(dmax, deg);
        }

    // coeffs[j][ci]: coefficient of t^j in coordinate ci of f(x + t y)
    std::vector<std::vector<PadicScalar>> coeffs(
        dmax + 1, std::vector<PadicScalar>(f.dim_out(), PadicScalar::zero(p)));
    for (std::size_t ci = 0; ci < f.dim_out(); ++ci) {
        for (const auto& [e, c] : f.coord(ci).terms()) {
            // t-polynomial of prod_i (x_i + t y_i)^{e_i} by convolution
            std::vector<PadicScalar> tp{PadicScalar::from_integer(p, 1, 256)};
            for (std::size_t i = 0; i < n; ++i) {
                for (std::uint32_t r = 0; r < e[i]; ++r) {
                    std::vector<PadicScalar> nt(tp.size() + 1, PadicScalar::zero(p));
                    for (std::size_t a = 0; a < tp.size(); ++a) {
                        nt[a] = nt[a] + tp[a] * x[i];
                        nt[a + 1] = nt[a + 1] + tp[a] * y[i];
                    }
                    tp = std::move(nt);
                }
            }
            for (std::size_t j = 0; j < tp.size(); ++j)
                coeffs[j][ci] = coeffs[j][ci] + c * tp[j];
        }
    }

    TaylorData out;
    for (std::size_t j = 0; j <= k && j <= dmax; ++j)
        out.a.emplace_back(coeffs[j]);
    while (out.a.size() <= k) out.a.push_back(PadicVector::zero(p, f.dim_out()));
    for (std::size_t j = k + 1; j <= dmax; ++j)
        out.r_coeffs.emplace_back(coeffs[j]);

    // internal consistency: j! a_j = d^j f(x; y, ..., y)
    for (std::size_t j = 1; j <= k && j <= dmax; ++j) {
        Integer fact;
        mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(j));
        PadicVector lhs = out.a[j];
        for (std::size_t ci = 0; ci < lhs.dim(); ++ci) lhs[ci] = lhs[ci].mul_exact(fact);
        const PadicVector rhs =
            iterated_derivative(f, x, std::vector<PadicVector>(j, y));
        if (!lhs.agrees(rhs))
            throw Error("internal: taylor coefficients disagree with iterated derivatives");
    }
    return out;
}

Rational lipschitz_upper(const PolyMap& f, const Ball& domain) {
    const std::uint32_t p = f.prime() ? f.prime() : domain.prime();
    // recenter so monomial bounds apply on an origin ball
    const PolyMap g = domain.center.is_zero_at_precision() ? f : f.translate(domain.center);
    const std::int64_t rho_exp = domain.radius_exp - 1; // max attained |coordinate|
    Rational upper(0);
    for (std::size_t ci = 0; ci < g.dim_out(); ++ci)
        for (const auto& [e, c] : g.coord(ci).terms()) {
            std::uint64_t deg = 0;
            for (auto ei : e) deg += ei;
            if (deg == 0) continue;
            upper = std::max(
                upper, Rational(c.abs_value() *
                                qp::pow_p(p, rho_exp * (static_cast<std::int64_t>(deg) - 1))));
        }
    return upper;
}

LipschitzBound lipschitz_bound(const PolyMap& f, const Ball& domain,
                               std::int64_t sample_mod_exp, std::uint64_t cap) {
    LipschitzBound out{lipschitz_upper(f, domain), Rational(0)};
    // sampled lower bound: displacement quotients over ball residues
    const std::int64_t n =
        std::max<std::int64_t>(domain.member_val_threshold() + 1, sample_mod_exp);
    std::vector<PadicVector> pts;
    try {
        pts = enumerate_ball_residues(domain, n, cap);
    } catch (const CapExceeded&) {
        pts = enumerate_ball_residues(domain, domain.member_val_threshold() + 1, cap);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PadicVector fi = f.eval(pts[i]);
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const PadicVector d = pts[i] - pts[j];
            if (d.is_zero_at_precision()) continue;
            const Rational dn = d.norm();
            if (dn == 0) continue;
            const PadicVector fd = fi - f.eval(pts[j]);
            // |f(i)-f(j)| is exact when nonzero at precision; skip unknowns
            Rational num(0);
            bool known = true;
            for (const auto& c : fd.entries()) {
                if (c.is_exact_zero()) continue;
                if (c.is_apparent_zero()) {
                    known = false;
                    continue;
                }
                num = std::max(num, c.abs_value());
            }
            if (!known && num == 0) continue;
            out.sampled_lower = std::max(out.sampled_lower, Rational(num / dn));
        }
    }
    return out;
}

Rational lipschitz_upper_block(const PolyMap& f, const std::vector<BlockSpec>& blocks,
                               std::size_t diff_block) {
    if (diff_block >= blocks.size()) throw InputError("diff block index out of range");
    const std::uint32_t p = f.prime();
    Rational upper(0);
    for (std::size_t ci = 0; ci < f.dim_out(); ++ci)
        for (const auto& [e, c] : f.coord(ci).terms()) {
            Rational w = c.abs_value();
            std::uint64_t diff_deg = 0;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                std::uint64_t deg = 0;
                for (std::size_t i = blocks[b].first; i < blocks[b].first + blocks[b].count; ++i)
                    deg += e[i];
                std::int64_t eff = static_cast<std::int64_t>(deg);
                if (b == diff_block) {
                    diff_deg = deg;
                    eff -= 1;
                }
                if (eff > 0 || eff < 0)
                    w *= qp::pow_p(p, (blocks[b].radius_exp - 1) * eff);
            }
            if (diff_deg == 0) continue;
            upper = std::max(upper, w);
        }
    return upper;
}

bool chain_identity_check(const PolyMap& f, const PolyMap& g, const ExtendedTriple& tr) {
    const PolyMap fg = f.compose(g);
    const PadicVector lhs = eval_extended(extended_map(fg), tr.x, tr.y, tr.t);
    const PadicVector gx = g.eval(tr.x);
    const PadicVector inner = eval_extended(extended_map(g), tr.x, tr.y, tr.t);
    const PadicVector rhs = eval_extended(extended_map(f), gx, inner, tr.t);
    return lhs.agrees(rhs);
}

} // namespace padic
