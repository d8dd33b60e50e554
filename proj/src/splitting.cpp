#include "padicnla/splitting.hpp"

#include <algorithm>

namespace padic {

namespace {

// |lambda| vs a for an eigenvalue-valuation w: p^{-w} <=> a, exact.
int compare_abs_to(const std::uint32_t p, const Rational& w, const Rational& a) {
    // p^{-w} ? a  <=>  1 ? a^den * p^{w_num}  (w = num/den, den > 0)
    const Integer num = w.get_num();
    const Integer den = w.get_den();
    // lhs = p^{-num/den} vs a: raise both sides to den: p^{-num} vs a^den
    Rational rhs = 1;
    const unsigned long d = den.get_ui();
    for (unsigned long i = 0; i < d; ++i) rhs *= a;
    const Integer num_neg = -num;
    const Rational lhs = (num >= 0) ? Rational(1, qp::pow_ui(p, num.get_ui()))
                                    : Rational(qp::pow_ui(p, num_neg.get_ui()));
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

} // namespace

HyperbolicityReport is_a_hyperbolic(const PadicMatrix& alpha, const Rational& a) {
    if (a <= 0 || a > 1) throw InputError("hyperbolicity level a must lie in ]0,1]");
    const UniPoly chi{charpoly(alpha)};
    const NewtonPolygon np = newton_polygon_slopes(chi);
    if (np.zero_root_multiplicity > 0)
        throw CertificateError("alpha has eigenvalue 0 and is not invertible");
    const std::uint32_t p = alpha.prime();
    HyperbolicityReport rep;
    rep.eigenvalue_valuations = np.slopes;
    rep.hyperbolic = true;
    for (const auto& [w, mult] : np.slopes) {
        if (compare_abs_to(p, w, a) == 0) {
            rep.hyperbolic = false;
            rep.offending_valuation = w;
            break;
        }
    }
    return rep;
}

std::pair<UniPoly, UniPoly> hensel_slope_split(const UniPoly& monic_f, std::int64_t k) {
    if (!monic_f.is_monic_at_precision())
        throw PrecisionError("hensel split requires a monic polynomial");
    const std::uint32_t p = monic_f.prime();
    const UniPoly mu = monic_f.dilate(k); // roots shifted to valuation +/-, split at 0

    const NewtonPolygon np = newton_polygon_slopes(mu);
    if (np.zero_root_multiplicity > 0)
        throw CertificateError("hensel split at the valuation of a zero root");
    std::int64_t d1 = 0, d2 = 0;
    for (const auto& [w, m] : np.slopes) {
        if (w > 0) d1 += m;
        else if (w < 0) d2 += m;
        else throw CertificateError("a root valuation equals the split threshold");
    }
    const std::int64_t deg = mu.degree();
    const std::int64_t one_prec =
        mu.min_abs_precision() == kInfValuation ? 64 : mu.min_abs_precision();
    const PadicScalar one = PadicScalar::from_integer(p, 1, one_prec);
    if (d1 == 0) return {UniPoly::constant(one), monic_f};
    if (d2 == 0) return {monic_f, UniPoly::constant(one)};

    // Initial factors from the polygon vertex at abscissa d1: the low
    // coefficients approximate the large-valuation factor.
    const std::size_t vx = static_cast<std::size_t>(d1);
    std::vector<PadicScalar> gc(mu.coeffs().begin(), mu.coeffs().begin() + vx + 1);
    UniPoly g = UniPoly(std::move(gc)).scale(mu[vx].invert());
    std::vector<PadicScalar> hc(mu.coeffs().begin() + vx, mu.coeffs().end());
    UniPoly h{std::move(hc)};
    h = h.scale(h.leading().invert()); // monic (leading of mu is 1 up to precision)

    // Quadratic lift: e = mu - g h; dg = (w e) mod g, dh = (u e) mod h with
    // u g + w h = 1; then h dg + g dh = e exactly and the new error is -dg dh.
    bool converged = false;
    for (int it = 0; it < 64; ++it) {
        const UniPoly e = mu - g * h;
        if (e.is_zero_at_precision()) {
            converged = true;
            break;
        }
        BezoutPair bz = bezout_coprime(g, h);
        const UniPoly dg = (bz.v * e).divmod(g).second;
        const UniPoly dh = (bz.u * e).divmod(h).second;
        if (dg.is_zero_at_precision() && dh.is_zero_at_precision()) {
            // corrections below precision but the residual is not: stuck
            break;
        }
        g = g + dg;
        h = h + dh;
    }
    if (!converged)
        throw PrecisionError("hensel lift did not converge at the working precision (" +
                             std::to_string(one_prec) + " digits); retry with more");
    if (g.degree() != d1 || h.degree() != static_cast<std::int64_t>(deg) - d1)
        throw PrecisionError("hensel lift produced factors of unexpected degree");

    return {g.dilate(-k), h.dilate(-k)};
}

namespace {

// Certified diagonal norm adaptation: find integer weights making
// ||D^{-1} M D|| < bound, using the weighted sup norm
// N(x) = max_{n <= n0} weight^{-n} ||M^n x|| with a p-power weight.
struct AdaptResult {
    PadicMatrix block;
    std::vector<std::int64_t> weights;
    bool adapted = false;
};

AdaptResult adapt_block(const PadicMatrix& m, const Rational& bound, std::int64_t weight_exp,
                        std::uint32_t p) {
    AdaptResult res{m, std::vector<std::int64_t>(m.rows(), 0), false};
    if (m.rows() == 0 || m.operator_norm() < bound) return res;

    const std::size_t d = m.rows();
    const std::int64_t prec = m.min_abs_precision();
    for (int n0 = 1; n0 <= 24; ++n0) {
        std::vector<Rational> nrm(d, Rational(1)); // N(e_i), n = 0 term
        PadicMatrix pw = m;
        for (int n = 1; n <= n0; ++n) {
            const Rational scale = qp::pow_p(p, -weight_exp * n);
            for (std::size_t i = 0; i < d; ++i) {
                Rational coln(0);
                for (std::size_t r = 0; r < d; ++r) coln = std::max(coln, pw.at(r, i).abs_value());
                nrm[i] = std::max(nrm[i], Rational(coln * scale));
            }
            if (n < n0) pw = pw * m;
        }
        std::vector<std::int64_t> w(d);
        for (std::size_t i = 0; i < d; ++i) w[i] = qp::floor_log_p(p, nrm[i]);
        // M' = D^{-1} M D, D = diag(p^{w_i})
        PadicMatrix m2 = m;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m2.at(i, j) = m.at(i, j).mul_pow_p(w[j] - w[i]);
        if (m2.operator_norm() < bound) {
            res.block = std::move(m2);
            res.weights = std::move(w);
            res.adapted = true;
            return res;
        }
    }
    (void)prec;
    throw CertificateError("norm adaptation failed: no diagonal p-power rescaling certifies the "
                           "block norm bound (non-integer eigenvalue valuations can make this "
                           "impossible for max-norms)");
}

PadicMatrix columns_matrix(const std::vector<PadicVector>& cols, std::size_t dim,
                           std::uint32_t p) {
    PadicMatrix c(dim, cols.size(), p);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) c.at(i, j) = cols[j][i];
    return c;
}

} // namespace

HyperbolicSplitting hyperbolic_splitting(const PadicMatrix& alpha, const Rational& a) {
    if (alpha.rows() != alpha.cols()) throw InputError("splitting a non-square matrix");
    const std::size_t d = alpha.rows();
    const std::uint32_t p = alpha.prime();
    const std::int64_t prec = alpha.min_abs_precision();
    const HyperbolicityReport rep = is_a_hyperbolic(alpha, a);
    if (!rep.hyperbolic)
        throw CertificateError("alpha is not a-hyperbolic: an eigenvalue has absolute value a");

    // Group eigenvalue valuations: |lambda| < a (contracting) vs > a.
    std::vector<std::pair<Rational, std::int64_t>> con, exp;
    for (const auto& [w, m] : rep.eigenvalue_valuations) {
        if (compare_abs_to(p, w, a) < 0) con.emplace_back(w, m);
        else exp.emplace_back(w, m);
    }
    std::int64_t d1 = 0, d2 = 0;
    for (auto& [w, m] : con) d1 += m;
    for (auto& [w, m] : exp) d2 += m;

    HyperbolicSplitting out;
    out.a = a;
    out.dim1 = static_cast<std::size_t>(d1);
    out.dim2 = static_cast<std::size_t>(d2);

    std::vector<PadicVector> basis1, basis2;
    if (d2 == 0) {
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<PadicScalar> v(d, PadicScalar::zero(p));
            v[i] = PadicScalar::from_integer(p, 1, prec);
            basis1.emplace_back(std::move(v));
        }
    } else if (d1 == 0) {
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<PadicScalar> v(d, PadicScalar::zero(p));
            v[i] = PadicScalar::from_integer(p, 1, prec);
            basis2.emplace_back(std::move(v));
        }
    } else {
        // Integer threshold between the two valuation groups, after powering:
        // w_pow * s_low < k < w_pow * s_high.
        Rational s_high = con.front().first; // min contracting valuation
        for (auto& [w, m] : con) s_high = std::min(s_high, w);
        Rational s_low = exp.front().first; // max expanding valuation
        for (auto& [w, m] : exp) s_low = std::max(s_low, w);

        std::int64_t w_pow = 0, k = 0;
        for (std::int64_t w = 1; w <= 256; ++w) {
            const Rational lo = s_low * Rational(static_cast<long>(w));
            const Rational hi = s_high * Rational(static_cast<long>(w));
            Integer kf;
            mpz_fdiv_q(kf.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
            const Integer cand = kf + 1;
            if (Rational(cand) > lo && Rational(cand) < hi) {
                w_pow = w;
                k = cand.get_si();
                break;
            }
        }
        if (w_pow == 0) throw Error("internal: no integer threshold found for the split");
        out.power_used = w_pow;
        out.threshold_used = k;

        const PadicMatrix beta = alpha.pow(static_cast<std::uint64_t>(w_pow), prec);
        const UniPoly chi_beta{charpoly(beta)};
        auto [f1, f2] = hensel_slope_split(chi_beta, k);
        out.factored = true;

        // Coprimality certificate: v(Res(f1, f2)) must equal the polygon
        // prediction deg(f1) * sum of expanding valuations difference terms.
        Rational expected(0);
        for (auto& [wc, mc] : con)
            for (auto& [we, me] : exp) {
                const Rational wcs = wc * w_pow, wes = we * w_pow;
                expected += std::min(wcs, wes) * Rational(static_cast<long>(mc * me));
            }
        const PadicScalar res = resultant(f1, f2);
        if (!res.is_invertible_at_precision())
            throw PrecisionError("resultant certificate undecidable at working precision");
        out.resultant_valuation_expected = expected;
        out.resultant_valuation_actual = Rational(static_cast<long>(res.valuation()));
        if (out.resultant_valuation_actual != expected)
            throw PrecisionError("hensel factors fail the resultant certificate");

        basis1 = kernel_basis(f1.eval(beta));
        basis2 = kernel_basis(f2.eval(beta));
        if (basis1.size() != out.dim1 || basis2.size() != out.dim2)
            throw PrecisionError("kernel dimensions disagree with the polygon multiplicities");
    }

    // Assemble, verify invariance, certify block norms (adapting if needed).
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<PadicVector> cols = basis1;
        cols.insert(cols.end(), basis2.begin(), basis2.end());
        PadicMatrix c = columns_matrix(cols, d, p);
        InvertResult cinv = invert_matrix(c);
        PadicMatrix conj = cinv.inverse * alpha * c;

        // off-diagonal blocks must vanish at precision (alpha-invariance)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const bool in1 = i < out.dim1, jn1 = j < out.dim1;
                if (in1 != jn1 && !conj.at(i, j).is_zero_at_precision())
                    throw PrecisionError("adapted basis is not alpha-invariant at precision");
            }

        PadicMatrix a1(out.dim1, out.dim1, p), a2(out.dim2, out.dim2, p);
        for (std::size_t i = 0; i < out.dim1; ++i)
            for (std::size_t j = 0; j < out.dim1; ++j) a1.at(i, j) = conj.at(i, j);
        for (std::size_t i = 0; i < out.dim2; ++i)
            for (std::size_t j = 0; j < out.dim2; ++j)
                a2.at(i, j) = conj.at(out.dim1 + i, out.dim1 + j);

        bool needs_adapt = false;
        if (out.dim1 && !(a1.operator_norm() < a)) needs_adapt = true;
        PadicMatrix a2inv;
        if (out.dim2) {
            a2inv = invert_matrix(a2).inverse;
            if (!(a2inv.operator_norm() < Rational(1) / a)) needs_adapt = true;
        }

        if (!needs_adapt || attempt == 1) {
            if (needs_adapt)
                throw CertificateError("block norm bounds fail after norm adaptation");
            out.basis1 = basis1;
            out.basis2 = basis2;
            out.alpha1 = a1;
            out.alpha2 = a2;
            out.change_of_basis = c;
            out.change_of_basis_inv = cinv.inverse;
            out.norm_alpha1 = out.dim1 ? a1.operator_norm() : Rational(0);
            out.norm_alpha2_inv = out.dim2 ? a2inv.operator_norm() : Rational(0);
            return out;
        }

        // Diagonal rescaling from the weighted sup norm; weight = the tight
        // p-power spectral bound of each block.
        if (out.dim1 && !(a1.operator_norm() < a)) {
            // weight = tight p-power >= spectral radius p^{-s_min}
            Rational s_min = con.empty() ? Rational(0) : con.front().first;
            for (auto& [w, m] : con) s_min = std::min(s_min, w);
            Integer fl;
            mpz_fdiv_q(fl.get_mpz_t(), s_min.get_num().get_mpz_t(),
                       s_min.get_den().get_mpz_t());
            AdaptResult ar = adapt_block(a1, a, -fl.get_si(), p);
            for (std::size_t i = 0; i < out.dim1; ++i)
                basis1[i] = basis1[i].scale(
                    PadicScalar::from_integer(p, 1, prec).mul_pow_p(ar.weights[i]));
            out.norm_adapted = out.norm_adapted || ar.adapted;
        }
        if (out.dim2) {
            PadicMatrix a2i = invert_matrix(a2).inverse;
            if (!(a2i.operator_norm() < Rational(1) / a)) {
                Rational s_max = exp.empty() ? Rational(0) : exp.front().first;
                for (auto& [w, m] : exp) s_max = std::max(s_max, w);
                // spectral radius of alpha2^{-1} is p^{s_max}; weight = ceil p-power
                Rational neg = -s_max;
                Integer fl;
                mpz_fdiv_q(fl.get_mpz_t(), neg.get_num().get_mpz_t(),
                           neg.get_den().get_mpz_t());
                AdaptResult ar = adapt_block(a2i, Rational(1) / a, -fl.get_si(), p);
                for (std::size_t i = 0; i < out.dim2; ++i)
                    basis2[i] = basis2[i].scale(
                        PadicScalar::from_integer(p, 1, prec).mul_pow_p(ar.weights[i]));
                out.norm_adapted = out.norm_adapted || ar.adapted;
            }
        }
    }
    throw Error("internal: unreachable in hyperbolic_splitting");
}

} // namespace padic
