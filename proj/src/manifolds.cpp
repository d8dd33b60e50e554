#include "padicnla/manifolds.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

namespace padic {

Rational WeightedSeq::weighted_norm(std::uint32_t p) const {
    Rational m(0);
    for (std::size_t n = 0; n < terms.size(); ++n)
        m = std::max(m, Rational(terms[n].norm() *
                                 qp::pow_p(p, weight_exp * static_cast<std::int64_t>(n))));
    return m;
}

namespace {

// Exact vector valuation: min coordinate valuation, provided the minimum is
// attained by a coordinate known nonzero and no apparent zero could undercut it.
std::optional<std::int64_t> exact_vector_valuation(const PadicVector& v) {
    std::int64_t known = kInfValuation;
    std::int64_t bound = kInfValuation;
    for (const auto& c : v.entries()) {
        if (c.is_exact_zero()) continue;
        if (c.is_apparent_zero()) bound = std::min(bound, c.abs_precision());
        else known = std::min(known, c.valuation());
    }
    if (known == kInfValuation && bound == kInfValuation) return kInfValuation; // exactly 0
    if (known <= bound && known != kInfValuation) return known;
    return std::nullopt;
}

} // namespace

std::vector<std::optional<std::int64_t>> WeightedSeq::weighted_valuations() const {
    std::vector<std::optional<std::int64_t>> out;
    out.reserve(terms.size());
    for (std::size_t n = 0; n < terms.size(); ++n) {
        auto v = exact_vector_valuation(terms[n]);
        if (v && *v != kInfValuation)
            out.push_back(*v - weight_exp * static_cast<std::int64_t>(n));
        else
            out.push_back(v); // nullopt or +inf
    }
    return out;
}

bool WeightedSeq::decay_flag() const {
    const auto wv = weighted_valuations();
    if (wv.empty()) return false;
    std::size_t start = wv.size() / 2;
    std::optional<std::int64_t> prev;
    for (std::size_t n = start; n < wv.size(); ++n) {
        if (!wv[n]) return false;
        if (*wv[n] == kInfValuation) continue; // exact zero tail stays fine
        if (prev && *wv[n] <= *prev) return false;
        prev = *wv[n];
    }
    return true;
}

Ball HyperbolicProblem::domain() const {
    return Ball{PadicVector::zero(p, dim()), r_exp};
}

PadicVector HyperbolicProblem::part1(const PadicVector& z) const {
    std::vector<PadicScalar> v(z.entries().begin(), z.entries().begin() + split.dim1);
    return PadicVector(std::move(v));
}

PadicVector HyperbolicProblem::part2(const PadicVector& z) const {
    std::vector<PadicScalar> v(z.entries().begin() + split.dim1, z.entries().end());
    return PadicVector(std::move(v));
}

HyperbolicProblem make_hyperbolic_problem(PolyMap f, const Rational& a, std::int64_t r_exp,
                                          const std::optional<PadicMatrix>& alpha_given) {
    if (f.dim_in() != f.dim_out()) throw InputError("hyperbolic problem needs a self-map");
    const std::uint32_t p = f.prime();
    HyperbolicProblem prob;
    prob.p = p;
    prob.r_exp = r_exp;
    prob.a = a;

    // a = p^{-s} with s >= 0
    if (a <= 0 || a > 1) throw InputError("weight a must lie in ]0,1]");
    const std::int64_t s = qp::floor_log_p(p, Rational(1) / a);
    if (qp::pow_p(p, -s) != a)
        throw InputError("weight a must be a power of p for the sequence-space machinery");
    prob.weight_exp = s;

    // f(0) = 0 exactly
    const PadicVector f0 = f.constant_part();
    for (const auto& c : f0.entries())
        if (!c.is_exact_zero())
            throw InputError("f(0) must vanish exactly (constant terms present)");

    // f'(0) = alpha, symbolically
    prob.alpha = f.linear_part(kInfValuation);
    if (alpha_given) {
        if (!prob.alpha.agrees(*alpha_given))
            throw InputError("supplied alpha disagrees with the linear part of f");
        prob.alpha = *alpha_given;
    }

    prob.split = hyperbolic_splitting(prob.alpha, a);

    // adapted coordinates
    const bool trivial_basis = [&] {
        if (prob.split.dim1 + prob.split.dim2 != f.dim_in()) return false;
        const PadicMatrix& c = prob.split.change_of_basis;
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < c.cols(); ++j) {
                const PadicScalar expect =
                    i == j ? PadicScalar::from_integer(prob.p, 1, 8) : PadicScalar::zero(prob.p);
                if (!c.at(i, j).agrees(expect)) return false;
            }
        return true;
    }();
    prob.f_hat = trivial_basis
                     ? f
                     : f.conjugate(prob.split.change_of_basis, prob.split.change_of_basis_inv,
                                   kInfValuation);
    PadicMatrix alpha_hat(f.dim_in(), f.dim_in(), p);
    for (std::size_t i = 0; i < prob.split.dim1; ++i)
        for (std::size_t j = 0; j < prob.split.dim1; ++j)
            alpha_hat.at(i, j) = prob.split.alpha1.at(i, j);
    for (std::size_t i = 0; i < prob.split.dim2; ++i)
        for (std::size_t j = 0; j < prob.split.dim2; ++j)
            alpha_hat.at(prob.split.dim1 + i, prob.split.dim1 + j) = prob.split.alpha2.at(i, j);
    if (!prob.f_hat.linear_part(kInfValuation).agrees(alpha_hat))
        throw PrecisionError("adapted linear part disagrees with the splitting blocks");
    prob.g_hat = prob.f_hat.subtract_linear(alpha_hat, kInfValuation);

    if (prob.split.dim2) prob.alpha2_inv = invert_matrix(prob.split.alpha2).inverse;

    // Lip(f - alpha) on U, against the shrinking condition
    prob.lip_g = lipschitz_upper(prob.g_hat, prob.domain());
    Rational shrink_budget(1);
    if (prob.split.dim2)
        shrink_budget =
            std::min(shrink_budget, Rational(Rational(1) / prob.alpha2_inv.operator_norm()));
    if (!(prob.lip_g < shrink_budget))
        throw CertificateError("Lip(f - alpha) = " + qp::to_string(prob.lip_g) +
                               " is not below min(1, ||alpha2^{-1}||^{-1}) = " +
                               qp::to_string(shrink_budget) + "; shrink r");

    // weighted contraction factor of the orbit operator:
    // max( L/a , L ||alpha2^{-1}|| )
    Rational factor(0);
    if (prob.split.dim1) factor = std::max(factor, Rational(prob.lip_g / a));
    if (prob.split.dim2)
        factor = std::max(factor, Rational(prob.lip_g * prob.alpha2_inv.operator_norm()));
    prob.lp_factor = factor;
    if (!(prob.lp_factor < 1))
        throw CertificateError("orbit operator is not a weighted contraction: factor = " +
                               qp::to_string(prob.lp_factor));

    prob.f = std::move(f);
    return prob;
}

OrbitResult orbit(const PolyMap& f, const Ball& domain, const PadicVector& z, std::size_t n) {
    OrbitResult out;
    PadicVector w = z;
    out.points.push_back(w);
    for (std::size_t i = 0; i < n; ++i) {
        bool inside;
        try {
            inside = domain.contains(w);
        } catch (const PrecisionError&) {
            inside = false;
        }
        if (!inside) {
            out.truncated_at = i;
            return out;
        }
        w = f.eval(w);
        out.points.push_back(w);
    }
    return out;
}

const char* to_string(StableVerdict v) {
    switch (v) {
        case StableVerdict::In: return "in";
        case StableVerdict::Out: return "out";
        default: return "undecided";
    }
}

StableResult is_in_stable_set(const HyperbolicProblem& prob, const PadicVector& z,
                              std::size_t horizon) {
    StableResult res;
    const std::int64_t s = prob.weight_exp;
    const std::int64_t contain_need = 1 - prob.r_exp;
    PadicVector w = z;
    for (std::size_t n = 0;; ++n) {
        res.steps = n;
        // provable escape / undecidable containment, coordinatewise
        for (const auto& c : w.entries()) {
            if (c.is_exact_zero()) continue;
            if (c.is_apparent_zero()) {
                if (c.abs_precision() < contain_need) {
                    res.verdict = StableVerdict::Undecided;
                    res.reason = "precision exhausted at step " + std::to_string(n);
                    return res;
                }
            } else if (c.valuation() < contain_need) {
                res.verdict = StableVerdict::Out;
                res.reason = "orbit leaves U at step " + std::to_string(n);
                return res;
            }
        }
        // weighted norm a^{-n} ||w|| < r  <=>  v(w) >= n s + 1 - r_exp
        const std::int64_t need = static_cast<std::int64_t>(n) * s + contain_need;
        const auto ev = exact_vector_valuation(w);
        const std::int64_t lower = w.valuation_lower_bound();
        if (ev && *ev != kInfValuation && *ev < need) {
            res.verdict = StableVerdict::Out;
            res.reason = "weighted norm reaches r at step " + std::to_string(n);
            return res;
        }
        if (lower < need) {
            res.verdict = StableVerdict::Undecided;
            res.reason = "weighted bound undecidable at step " + std::to_string(n);
            return res;
        }
        const std::int64_t wval =
            lower == kInfValuation ? kInfValuation : lower - static_cast<std::int64_t>(n) * s;
        res.trace.push_back(DecayStep{n, wval, ev.has_value()});
        if (n == horizon) break;
        w = prob.f_hat.eval(w);
    }

    // decay over the trailing half of the horizon: strictly increasing
    // weighted valuations, exactly known
    const std::size_t start = horizon / 2;
    std::optional<std::int64_t> prev;
    bool ok = horizon > 0;
    for (std::size_t n = start; n < res.trace.size() && ok; ++n) {
        const DecayStep& st = res.trace[n];
        if (!st.exact) {
            ok = false;
            break;
        }
        if (st.weighted_val_lower == kInfValuation) continue; // exact zero tail
        if (prev && st.weighted_val_lower <= *prev) ok = false;
        prev = st.weighted_val_lower;
    }
    if (ok) {
        res.verdict = StableVerdict::In;
        res.reason = "weighted valuations strictly increase over the trailing half";
    } else {
        res.verdict = StableVerdict::Undecided;
        res.reason = "no provable decay within the horizon";
    }
    return res;
}

WeightedSeq seq_map(const PolyMap& f, const Ball& domain, const WeightedSeq& z) {
    WeightedSeq out;
    out.weight_exp = z.weight_exp;
    out.terms.reserve(z.terms.size());
    for (std::size_t n = 0; n < z.terms.size(); ++n) {
        if (!domain.contains(z.terms[n]))
            throw EscapeError("sequence term " + std::to_string(n) + " outside the domain");
        out.terms.push_back(f.eval(z.terms[n]));
    }
    return out;
}

StableGraphResult stable_graph(const HyperbolicProblem& prob, const PadicVector& x,
                               std::size_t horizon, std::int64_t target_prec) {
    const std::size_t d1 = prob.split.dim1, d2 = prob.split.dim2, d = prob.dim();
    if (x.dim() != d1) throw InputError("stable_graph probe must live in E_1 coordinates");
    if (horizon == 0) throw InputError("horizon must be positive");
    const std::uint32_t p = prob.p;
    const Rational r = qp::pow_p(p, prob.r_exp);
    if (!(x.norm() < r)) throw EscapeError("probe x outside U_1");

    // certified truncation error of omega_0 (weighted), then per-term digits
    // err_w(n) = (a ||a2^{-1}||)^{H+1-n} * L r / a, through the fixed point
    // divided by (1 - lp_factor)
    const Rational a2n = d2 ? prob.alpha2_inv.operator_norm() : Rational(0);
    auto term_digits = [&](std::size_t n) -> std::int64_t {
        if (d2 == 0) return kInfValuation;
        Rational e = prob.lip_g * r / prob.a / (1 - prob.lp_factor);
        Rational base = prob.a * a2n;
        for (std::size_t i = 0; i < horizon + 1 - n; ++i) e *= base;
        // absolute error of term n: a^n * weighted error
        e *= qp::pow_p(p, -prob.weight_exp * static_cast<std::int64_t>(n));
        return digits_from_bound(p, e);
    };
    const std::int64_t phi_digits = term_digits(0);
    if (phi_digits != kInfValuation && phi_digits < target_prec)
        throw CertificateError("horizon " + std::to_string(horizon) + " certifies only " +
                               std::to_string(phi_digits) + " digits of phi; raise it");

    std::vector<PadicVector> omega(horizon, PadicVector::zero(p, d));
    auto assemble = [&](const PadicVector& first, const PadicVector& second) {
        std::vector<PadicScalar> v;
        v.reserve(d);
        for (const auto& e : first.entries()) v.push_back(e);
        for (const auto& e : second.entries()) v.push_back(e);
        return PadicVector(std::move(v));
    };

    std::size_t iters = 0;
    const std::size_t max_it =
        64 + 4 * static_cast<std::size_t>(std::max<std::int64_t>(target_prec, 1));
    for (;; ++iters) {
        if (iters > max_it)
            throw PrecisionError("orbit operator iteration did not stabilize");
        // images of the nonlinearity along the current sequence
        std::vector<PadicVector> g1, g2;
        g1.reserve(horizon);
        g2.reserve(horizon);
        for (std::size_t n = 0; n < horizon; ++n) {
            const PadicVector gv = prob.g_hat.eval(omega[n]);
            g1.push_back(prob.part1(gv));
            g2.push_back(prob.part2(gv));
        }
        // first block: alpha1^n x + sum_{m<n} alpha1^{n-1-m} g1(omega_m)
        std::vector<PadicVector> first(horizon, PadicVector::zero(p, d1));
        if (d1) {
            PadicVector pw = x;
            PadicVector acc = PadicVector::zero(p, d1);
            for (std::size_t n = 0; n < horizon; ++n) {
                first[n] = pw + acc;
                if (n + 1 < horizon) {
                    pw = prob.split.alpha1 * pw;
                    acc = prob.split.alpha1 * acc + g1[n];
                }
            }
        }
        // second block: R_n = alpha2^{-1} (R_{n+1} - g2(omega_n)), R_H = 0
        std::vector<PadicVector> second(horizon, PadicVector::zero(p, d2));
        if (d2) {
            PadicVector r_next = PadicVector::zero(p, d2);
            for (std::size_t n = horizon; n > 0; --n) {
                r_next = prob.alpha2_inv * (r_next - g2[n - 1]);
                second[n - 1] = r_next;
            }
        }
        bool stable = true;
        std::vector<PadicVector> next(horizon, PadicVector::zero(p, d));
        for (std::size_t n = 0; n < horizon; ++n) {
            next[n] = assemble(first[n], second[n]);
            const PadicVector diff = next[n] - omega[n];
            // an apparent-zero update has hit the tracked-precision ceiling
            if (diff.is_zero_at_precision()) continue;
            const std::int64_t want =
                std::min<std::int64_t>(target_prec + 4, term_digits(n));
            if (diff.valuation_lower_bound() < want) stable = false;
        }
        omega = std::move(next);
        if (!(WeightedSeq{prob.weight_exp, omega}.weighted_norm(p) < r))
            throw EscapeError("orbit iterate left the weighted ball");
        if (stable && iters > 0) break;
    }

    StableGraphResult out;
    out.iterations = iters;
    out.lp_factor = prob.lp_factor;
    out.tail_digits = phi_digits;
    out.omega.weight_exp = prob.weight_exp;
    out.omega.terms.reserve(horizon);
    for (std::size_t n = 0; n < horizon; ++n)
        out.omega.terms.push_back(omega[n].with_abs_precision(
            std::min<std::int64_t>(term_digits(n), target_prec + 4)));
    out.phi = prob.part2(out.omega.terms[0]);
    return out;
}

TangencyReport verify_tangency(const HyperbolicProblem& prob,
                               const std::vector<PadicVector>& probes, std::size_t horizon,
                               std::int64_t target_prec) {
    TangencyReport rep;
    rep.c = -kInfValuation;
    bool have_c = false;
    for (const auto& x : probes) {
        TangencyEntry e;
        e.x = x;
        e.val_x = x.valuation_lower_bound();
        const StableGraphResult sg = stable_graph(prob, x, horizon, target_prec);
        e.val_phi = sg.phi.dim() == 0 ? kInfValuation : sg.phi.valuation_lower_bound();
        if (e.val_phi != kInfValuation && e.val_x != kInfValuation) {
            rep.c = std::max(rep.c, 2 * e.val_x - e.val_phi);
            have_c = true;
        }
        rep.entries.push_back(std::move(e));
    }
    if (!have_c) rep.c = 0;
    rep.quadratic = rep.c <= 0;
    return rep;
}

ClassifyResult classify_residues(const HyperbolicProblem& prob, std::int64_t n_mod,
                                 std::size_t horizon, std::uint64_t cap, unsigned threads) {
    const Ball u = prob.domain();
    const Integer total = count_ball_residues(u, n_mod);
    if (total > Integer(static_cast<unsigned long>(cap)))
        throw CapExceeded("classification would enumerate " + total.get_str() +
                          " residues, above the cap of " + std::to_string(cap));
    const std::size_t count = static_cast<std::size_t>(total.get_ui());

    std::vector<StableVerdict> verdicts(count, StableVerdict::Undecided);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const PadicVector z =
                ball_residue_by_index(u, n_mod, Integer(static_cast<unsigned long>(i)));
            verdicts[i] = is_in_stable_set(prob, z, horizon).verdict;
        }
    };
    const unsigned nt = std::max(1u, threads);
    if (nt == 1 || count < 2 * nt) {
        work(0, count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (count + nt - 1) / nt;
        for (unsigned t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // aggregate per x-class
    std::map<std::string, ClassifyRow> rows;
    ClassifyResult out;
    out.total = count;
    for (std::size_t i = 0; i < count; ++i) {
        const PadicVector z =
            ball_residue_by_index(u, n_mod, Integer(static_cast<unsigned long>(i)));
        const std::string xk = prob.part1(z).residue_key(n_mod);
        const std::string yk = prob.part2(z).residue_key(n_mod);
        auto& row = rows[xk];
        row.x_key = xk;
        switch (verdicts[i]) {
            case StableVerdict::In:
                ++row.in_count;
                ++out.in_count;
                row.surviving_y.push_back(yk);
                break;
            case StableVerdict::Undecided:
                ++row.undecided_count;
                ++out.undecided_count;
                row.surviving_y.push_back(yk);
                break;
            case StableVerdict::Out:
                ++row.out_count;
                ++out.out_count;
                break;
        }
    }
    out.graph_property = !rows.empty();
    for (auto& [k, row] : rows) {
        if (row.surviving_y.size() != 1) out.graph_property = false;
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::string classify_table_text(const ClassifyResult& r) {
    std::size_t wx = 9, wy = 20;
    for (const auto& row : r.rows) {
        wx = std::max(wx, row.x_key.size());
        std::size_t ly = 0;
        for (const auto& y : row.surviving_y) ly += y.size() + 1;
        wy = std::max(wy, ly);
    }
    std::ostringstream os;
    os << std::string(wx, ' ') << "  surviving-y" << std::string(wy > 11 ? wy - 11 : 1, ' ')
       << "  in/out/undecided\n";
    for (const auto& row : r.rows) {
        std::string ys;
        for (const auto& y : row.surviving_y) ys += (ys.empty() ? "" : " ") + y;
        if (ys.empty()) ys = "-";
        os << row.x_key << std::string(wx - row.x_key.size() + 2, ' ') << ys
           << std::string(ys.size() < wy ? wy - ys.size() + 2 : 2, ' ') << row.in_count << "/"
           << row.out_count << "/" << row.undecided_count << "\n";
    }
    os << "classes: " << r.total << "  in: " << r.in_count << "  out: " << r.out_count
       << "  undecided: " << r.undecided_count
       << "  graph property: " << (r.graph_property ? "holds" : "fails") << "\n";
    return os.str();
}

} // namespace padic
