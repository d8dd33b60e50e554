#include "padicnla/solvers.hpp"

#include <algorithm>
#include <set>

namespace padic {

std::int64_t digits_from_bound(std::uint32_t p, const Rational& bound) {
    if (bound == 0) return kInfValuation;
    const std::int64_t e = qp::floor_log_p(p, bound);
    return (qp::pow_p(p, e) == bound) ? -e : -e - 1;
}

namespace {

PadicVector concat(const PadicVector& a, const PadicVector& b) {
    std::vector<PadicScalar> v;
    v.reserve(a.dim() + b.dim());
    for (const auto& e : a.entries()) v.push_back(e);
    for (const auto& e : b.entries()) v.push_back(e);
    return PadicVector(std::move(v));
}

// Iterates step() from start until the update valuation reaches target_prec;
// enforces ball containment and monotone theta-contraction of displacements.
struct IterationOut {
    PadicVector x;
    std::size_t iterations;
};

template <typename Step>
IterationOut iterate_contraction(PadicVector x, const Ball& domain, const Rational& theta,
                                 std::int64_t target_prec, Step step) {
    Rational prev_disp(-1);
    const std::size_t max_it = 64 + 4 * static_cast<std::size_t>(std::max<std::int64_t>(
                                        target_prec > 0 ? target_prec : 1, 1));
    for (std::size_t it = 1; it <= max_it; ++it) {
        PadicVector xn = step(x);
        if (!domain.contains(xn))
            throw EscapeError("iterate " + std::to_string(it) + " left the domain");
        const PadicVector d = xn - x;
        const std::int64_t dv = d.valuation_lower_bound();
        if (!d.is_zero_at_precision()) {
            const Rational dn = d.norm();
            if (prev_disp > 0 && dn > theta * prev_disp)
                throw CertificateError(
                    "non-contraction detected: displacement quotient exceeds theta");
            prev_disp = dn;
        }
        x = std::move(xn);
        // done at the requested precision, or at the tracked-precision ceiling
        // (the update carries no known digits, so no iteration can improve it)
        if (dv >= target_prec || d.is_zero_at_precision())
            return IterationOut{std::move(x), it};
    }
    throw PrecisionError("contraction iteration did not reach the target precision");
}

} // namespace

ContractionSpec make_contraction_spec(PolyMap family, std::size_t param_dim, Ball param_domain,
                                      Ball state_domain) {
    const std::size_t state_dim = family.dim_in() - param_dim;
    if (family.dim_out() != state_dim)
        throw InputError("contraction family must map into the state space");
    if (param_domain.dim() != param_dim || state_domain.dim() != state_dim)
        throw InputError("contraction domains have wrong dimensions");

    // Uniform Lipschitz bound in the state block over the product ball,
    // after recentering both balls at the origin.
    PolyMap g = family.translate(concat(param_domain.center, state_domain.center));
    const std::vector<BlockSpec> blocks{
        BlockSpec{0, param_dim, param_domain.radius_exp},
        BlockSpec{param_dim, state_dim, state_domain.radius_exp}};
    const Rational theta = lipschitz_upper_block(g, blocks, 1);
    if (!(theta < 1))
        throw CertificateError("family is not a uniform contraction: certified theta = " +
                               qp::to_string(theta) + " >= 1");
    return ContractionSpec{std::move(family), param_dim, std::move(param_domain),
                           std::move(state_domain), theta};
}

FixedPointResult fixed_point(const ContractionSpec& spec, const PadicVector& param,
                             std::int64_t target_prec) {
    if (param.dim() != spec.param_dim) throw InputError("parameter dimension mismatch");
    if (!spec.param_domain.contains(param))
        throw InputError("parameter outside the certified parameter domain");
    const std::uint32_t p = spec.family.prime();

    const PadicVector start = spec.state_domain.center;
    const PadicVector first = spec.family.eval(concat(param, start));
    const Rational d0 = (first - start).norm();

    auto out = iterate_contraction(start, spec.state_domain, spec.theta, target_prec,
                                   [&](const PadicVector& x) {
                                       return spec.family.eval(concat(param, x));
                                   });
    out.x = out.x.with_abs_precision(target_prec);

    // classical certified error theta^k d0 / (1 - theta), in digits
    Rational err = d0 / (1 - spec.theta);
    for (std::size_t i = 0; i < out.iterations; ++i) err *= spec.theta;
    FixedPointResult res;
    res.iterations = out.iterations;
    res.certified_digits = digits_from_bound(p, err);

    const PadicVector resid = spec.family.eval(concat(param, out.x)) - out.x;
    if (!resid.is_zero_at_precision())
        throw PrecisionError("fixed point residual does not vanish at precision");
    res.residual_precision = resid.abs_precision();
    res.x = std::move(out.x);
    return res;
}

FamilyResult fixed_point_family(const ContractionSpec& spec,
                                const std::vector<PadicVector>& params,
                                const std::vector<DqProbe>& probes, std::int64_t target_prec) {
    FamilyResult out;
    auto solve_one = [&](const PadicVector& pr) -> FamilyEntry {
        FamilyEntry e{pr, std::nullopt, "ok"};
        try {
            e.result = fixed_point(spec, pr, target_prec);
        } catch (const EscapeError& ex) {
            e.status = std::string("escaped: ") + ex.what();
        } catch (const Error& ex) {
            e.status = ex.what();
        }
        return e;
    };
    for (const auto& pr : params) out.entries.push_back(solve_one(pr));

    for (const auto& probe : probes) {
        std::vector<DqEntry> row;
        FamilyEntry base = solve_one(probe.base);
        for (const auto& t : probe.ts) {
            DqEntry de{t, std::nullopt, "ok"};
            if (!base.result) {
                de.status = "base: " + base.status;
            } else if (!t.is_invertible_at_precision()) {
                de.status = "t is zero at precision";
            } else {
                FamilyEntry shifted = solve_one(probe.base + probe.dir.scale(t));
                if (!shifted.result) de.status = "shifted: " + shifted.status;
                else
                    de.quotient = (shifted.result->x - base.result->x).scale(t.invert());
            }
            row.push_back(std::move(de));
        }
        out.dq.push_back(std::move(row));
    }
    return out;
}

PadicVector InverseProblem::apply(const PadicVector& y) const {
    return (a * y) + f_tilde.eval(y);
}

namespace {

InverseProblem make_inverse_problem_impl(PadicMatrix a, PolyMap f_tilde, Ball domain,
                                         bool check) {
    if (a.rows() != a.cols()) throw InputError("inverse problem needs a square A");
    if (f_tilde.dim_in() != a.cols() || f_tilde.dim_out() != a.rows())
        throw InputError("f_tilde shape must match A");
    InverseProblem prob;
    prob.a_inv = invert_matrix(a).inverse;
    const Rational inv_norm_inv = Rational(1) / prob.a_inv.operator_norm();
    prob.lip_tilde = lipschitz_upper(f_tilde, domain);
    prob.certified = prob.lip_tilde < inv_norm_inv;
    if (check && !prob.certified)
        throw CertificateError("Lip(f~) = " + qp::to_string(prob.lip_tilde) +
                               " must be < ||A^-1||^-1 = " + qp::to_string(inv_norm_inv));
    prob.bound_a = inv_norm_inv - prob.lip_tilde;
    prob.bound_b = a.operator_norm() + prob.lip_tilde;
    prob.lip_inverse = prob.bound_a > 0 ? Rational(Rational(1) / prob.bound_a) : Rational(0);
    prob.contraction = prob.a_inv.operator_norm() * prob.lip_tilde;
    prob.a = std::move(a);
    prob.f_tilde = std::move(f_tilde);
    prob.domain = std::move(domain);
    return prob;
}

} // namespace

InverseProblem make_inverse_problem(PadicMatrix a, PolyMap f_tilde, Ball domain) {
    return make_inverse_problem_impl(std::move(a), std::move(f_tilde), std::move(domain), true);
}

InverseProblem make_inverse_problem_unchecked(PadicMatrix a, PolyMap f_tilde, Ball domain) {
    return make_inverse_problem_impl(std::move(a), std::move(f_tilde), std::move(domain), false);
}

ImageBallBounds image_ball_bounds(const InverseProblem& prob) {
    return ImageBallBounds{prob.bound_a, prob.bound_b, prob.lip_inverse};
}

InvertPointResult lipschitz_invert(const InverseProblem& prob, const PadicVector& z,
                                   std::int64_t target_prec) {
    InvertPointResult res;
    const PadicVector fc = prob.apply(prob.domain.center);
    const Rational zone = prob.bound_a * qp::pow_p(z.prime(), prob.domain.radius_exp);
    res.in_guarantee_zone = (z - fc).norm() < zone;

    auto out = iterate_contraction(prob.domain.center, prob.domain, prob.contraction,
                                   target_prec, [&](const PadicVector& y) {
                                       return y + prob.a_inv * (z - prob.apply(y));
                                   });
    out.x = out.x.with_abs_precision(target_prec);
    res.iterations = out.iterations;
    const PadicVector resid = prob.apply(out.x) - z;
    if (!resid.is_zero_at_precision())
        throw PrecisionError("inverse residual does not vanish at precision");
    res.residual_precision = resid.abs_precision();
    res.y = std::move(out.x);
    return res;
}

ExactImageResult verify_exact_image(const InverseProblem& prob, const PadicVector& y,
                                    std::int64_t s_exp, std::int64_t n, std::uint64_t cap,
                                    const std::optional<PadicVector>& rhs_shift) {
    const std::uint32_t p = prob.a.prime();
    if (s_exp > prob.domain.radius_exp)
        throw InputError("sub-ball radius exceeds the problem domain");
    // enumerate finely enough that classes map to well-defined classes mod p^n
    const Rational na = prob.a.operator_norm();
    std::int64_t extra = 0;
    if (na > 1) extra = qp::floor_log_p(p, na) + (qp::pow_p(p, qp::floor_log_p(p, na)) == na ? 0 : 1);
    const std::int64_t nf = n + extra;

    const PadicVector shift = rhs_shift ? *rhs_shift : prob.apply(y);

    std::set<std::string> img, rhs;
    Ball by{y, s_exp};
    for_each_ball_residue(
        by, nf, [&](const PadicVector& w) { img.insert(prob.apply(w).residue_key(n)); }, cap);
    Ball b0{PadicVector::zero(p, y.dim()), s_exp};
    for_each_ball_residue(
        b0, nf,
        [&](const PadicVector& w) { rhs.insert((shift + prob.a * w).residue_key(n)); }, cap);

    ExactImageResult out;
    out.classes_checked = img.size();
    out.equal = (img == rhs);
    if (!out.equal) {
        for (const auto& k : img)
            if (!rhs.count(k)) {
                out.counterexample = "image class " + k + " missing from f(y) + A.B";
                break;
            }
        if (!out.counterexample)
            for (const auto& k : rhs)
                if (!img.count(k)) {
                    out.counterexample = "class " + k + " of f(y) + A.B not attained by f";
                    break;
                }
    }
    return out;
}

namespace {

// Shared zone computation: largest u <= u_start with
//   L_y(u) < ||A^{-1}||^{-1}   and   reach(u) := c_reach * L_x(u) * p^{u-1} < rhs(u)
// where rhs(u) = (||A^{-1}||^{-1} - L_y(u)) * p^{r_exp} for the implicit case
// and p^{r_exp} / ||A^{-1}||... callers pass lambdas.
struct ZoneOut {
    std::int64_t u;
    Rational lip_y;
};

template <typename Cond>
ZoneOut find_zone(std::int64_t u_start, std::int64_t u_floor, Cond cond) {
    for (std::int64_t u = u_start; u >= u_floor; --u) {
        auto [ok, lip_y] = cond(u);
        if (ok) return ZoneOut{u, lip_y};
    }
    throw CertificateError("no certified neighbourhood: the Lipschitz budget cannot be met "
                           "for any parameter radius down to p^" + std::to_string(u_floor));
}

} // namespace

ImplicitResult implicit_solve(const PolyMap& f, std::size_t x_dim, const PadicVector& x0,
                              const PadicVector& y0, const Ball& y_domain,
                              const std::vector<PadicVector>& probes,
                              std::int64_t target_prec) {
    const std::size_t y_dim = f.dim_in() - x_dim;
    if (f.dim_out() != y_dim)
        throw InputError("implicit problem: f must map into the y-space");
    if (x0.dim() != x_dim || y0.dim() != y_dim) throw InputError("base point dimensions");
    const std::uint32_t p = f.prime();

    const PadicVector f00 = f.eval(concat(x0, y0));
    if (!f00.is_zero_at_precision())
        throw InputError("f(x0, y0) must vanish: got " + f00.to_string());

    ImplicitResult out;
    out.a = f.jacobian_block_at(concat(x0, y0), x_dim, y_dim);
    const PadicMatrix a_inv = invert_matrix(out.a).inverse;
    const Rational inv_bound = Rational(1) / a_inv.operator_norm();

    // recentered map F(xi, eta) = f(x0 + xi, y0 + eta); F(0,0) = 0
    const PolyMap F = f.translate(concat(x0, y0));
    // G = F - A eta (the part whose y-Lipschitz constant must stay under budget)
    PadicMatrix zero_a(y_dim, x_dim + y_dim, p);
    for (std::size_t i = 0; i < y_dim; ++i)
        for (std::size_t j = 0; j < y_dim; ++j) zero_a.at(i, x_dim + j) = out.a.at(i, j);
    const PolyMap G = F.subtract_linear(zero_a, kInfValuation);

    const std::int64_t r_exp = y_domain.radius_exp;
    auto zone = find_zone(r_exp + 48, r_exp - 96, [&](std::int64_t u) {
        const std::vector<BlockSpec> blocks{BlockSpec{0, x_dim, u},
                                            BlockSpec{x_dim, y_dim, r_exp}};
        const Rational ly = lipschitz_upper_block(G, blocks, 1);
        if (!(ly < inv_bound)) return std::pair<bool, Rational>{false, ly};
        const Rational lx = lipschitz_upper_block(F, blocks, 0);
        const bool reach = lx * qp::pow_p(p, u - 1) < (inv_bound - ly) * qp::pow_p(p, r_exp);
        return std::pair<bool, Rational>{reach, ly};
    });
    out.u0_radius_exp = zone.u;
    out.lip_y_budget = zone.lip_y;
    out.contraction_q = a_inv.operator_norm() * zone.lip_y;

    const Ball eta_ball{PadicVector::zero(p, y_dim), r_exp};
    for (const auto& x : probes) {
        ImplicitEntry ent;
        ent.x = x;
        const PadicVector xi = x - x0;
        ent.certified = xi.norm() < qp::pow_p(p, zone.u);
        try {
            auto it = iterate_contraction(
                PadicVector::zero(p, y_dim), eta_ball, out.contraction_q, target_prec,
                [&](const PadicVector& eta) {
                    return eta - a_inv * F.eval(concat(xi, eta));
                });
            PadicVector lambda = (y0 + it.x).with_abs_precision(target_prec);
            const PadicVector resid = f.eval(concat(x, lambda));
            if (!resid.is_zero_at_precision())
                throw PrecisionError("implicit residual does not vanish at precision");
            ent.residual_precision = resid.abs_precision();
            ent.iterations = it.iterations;
            ent.lambda = std::move(lambda);
            ent.status = "ok";
        } catch (const EscapeError& ex) {
            ent.status = std::string("escaped: ") + ex.what();
        } catch (const Error& ex) {
            ent.status = ex.what();
        }
        out.entries.push_back(std::move(ent));
    }
    return out;
}

ParametricResult parametric_inverse(const PolyMap& f, std::size_t p_dim, const PadicVector& p0,
                                    const PadicVector& y0, const Ball& y_domain,
                                    const std::vector<ParametricProbe>& probes,
                                    std::int64_t target_prec) {
    const std::size_t y_dim = f.dim_in() - p_dim;
    if (f.dim_out() != y_dim)
        throw InputError("parametric problem: f must map into the y-space");
    const std::uint32_t p = f.prime();

    const PadicVector v0 = f.eval(concat(p0, y0));
    ParametricResult out;
    out.a = f.jacobian_block_at(concat(p0, y0), p_dim, y_dim);
    const PadicMatrix a_inv = invert_matrix(out.a).inverse;
    const Rational inv_bound = Rational(1) / a_inv.operator_norm();

    const PolyMap F0 = f.translate(concat(p0, y0)); // F0(pi, eta) = f(p0+pi, y0+eta)
    PadicMatrix zero_a(y_dim, p_dim + y_dim, p);
    for (std::size_t i = 0; i < y_dim; ++i)
        for (std::size_t j = 0; j < y_dim; ++j) zero_a.at(i, p_dim + j) = out.a.at(i, j);
    const PolyMap G = F0.subtract_linear(zero_a, kInfValuation);

    const std::int64_t r_exp = y_domain.radius_exp;
    auto zone = find_zone(r_exp + 48, r_exp - 96, [&](std::int64_t u) {
        const std::vector<BlockSpec> blocks{BlockSpec{0, p_dim, u},
                                            BlockSpec{p_dim, y_dim, r_exp}};
        const Rational ly = lipschitz_upper_block(G, blocks, 1);
        if (!(ly < inv_bound)) return std::pair<bool, Rational>{false, ly};
        // parameter drift: f_p(y0) - v0 must stay in A.B_r(0)
        const Rational lp = lipschitz_upper_block(F0, blocks, 0);
        const bool reach = a_inv.operator_norm() * lp * qp::pow_p(p, u - 1) <
                           qp::pow_p(p, r_exp);
        return std::pair<bool, Rational>{reach, ly};
    });
    out.p_radius_exp = zone.u;
    out.contraction_q = a_inv.operator_norm() * zone.lip_y;

    const Ball eta_ball{PadicVector::zero(p, y_dim), r_exp};
    for (const auto& probe : probes) {
        ParametricEntry ent;
        ent.p = probe.p;
        ent.v = probe.v;
        const PadicVector pi = probe.p - p0;
        const bool p_ok = pi.norm() < qp::pow_p(p, zone.u);
        bool v_ok = false;
        try {
            v_ok = (a_inv * (probe.v - v0)).norm() < qp::pow_p(p, r_exp);
        } catch (const Error&) {
            v_ok = false;
        }
        ent.certified = p_ok && v_ok;
        try {
            const PadicVector w = probe.v - v0;
            auto it = iterate_contraction(
                PadicVector::zero(p, y_dim), eta_ball, out.contraction_q, target_prec,
                [&](const PadicVector& eta) {
                    return eta + a_inv * (w - F0.eval(concat(pi, eta)));
                });
            PadicVector psi = (y0 + it.x).with_abs_precision(target_prec);
            const PadicVector resid = f.eval(concat(probe.p, psi)) - probe.v;
            if (!resid.is_zero_at_precision())
                throw PrecisionError("parametric inverse residual does not vanish");
            ent.residual_precision = resid.abs_precision();
            ent.iterations = it.iterations;
            ent.psi = std::move(psi);
            ent.status = "ok";
        } catch (const EscapeError& ex) {
            ent.status = std::string("escaped: ") + ex.what();
        } catch (const Error& ex) {
            ent.status = ex.what();
        }
        out.entries.push_back(std::move(ent));
    }
    return out;
}

} // namespace padic
