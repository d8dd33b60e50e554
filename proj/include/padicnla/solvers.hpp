#pragma once

#include <optional>

#include "padicnla/calculus.hpp"

namespace padic {

/// A uniform family of contractions f_p: state_domain -> state_domain with one
/// contraction factor theta < 1 for every parameter in param_domain. theta is
/// certified symbolically (uniform block Lipschitz bound over the product of
/// the two balls) at construction.
struct ContractionSpec {
    PolyMap family; // (param vars, state vars) -> state dims
    std::size_t param_dim = 0;
    Ball param_domain;
    Ball state_domain;
    Rational theta;
};

ContractionSpec make_contraction_spec(PolyMap family, std::size_t param_dim, Ball param_domain,
                                      Ball state_domain);

struct FixedPointResult {
    PadicVector x;
    std::size_t iterations = 0;
    /// Guaranteed correct digits from theta^k d0 / (1 - theta).
    std::int64_t certified_digits = 0;
    /// Absolute precision at which the residual f_p(x*) - x* vanishes.
    std::int64_t residual_precision = 0;
};

/// Banach iteration from the state-domain center. Stops when the update's
/// valuation reaches target_prec (exact in the ultrametric contraction
/// regime). Throws EscapeError when an iterate leaves the state domain
/// (the parameter lies outside the open set Q) and CertificateError when a
/// displacement quotient exceeds theta.
FixedPointResult fixed_point(const ContractionSpec& spec, const PadicVector& param,
                             std::int64_t target_prec);

struct FamilyEntry {
    PadicVector param;
    std::optional<FixedPointResult> result;
    std::string status; // "ok" | "escaped" | error text
};

/// Finite difference probe of the parameter dependence p -> x_p.
struct DqProbe {
    PadicVector base;
    PadicVector dir;
    std::vector<PadicScalar> ts;
};
struct DqEntry {
    PadicScalar t;
    std::optional<PadicVector> quotient; // (phi(base + t dir) - phi(base)) / t
    std::string status;
};
struct FamilyResult {
    std::vector<FamilyEntry> entries;
    std::vector<std::vector<DqEntry>> dq; // one row per probe
};

/// Per-parameter fixed points; escapes are flagged per entry, never a global
/// abort. Difference quotients of the fixed-point map are emitted for the
/// supplied probes to exhibit the smooth parameter dependence.
FamilyResult fixed_point_family(const ContractionSpec& spec,
                                const std::vector<PadicVector>& params,
                                const std::vector<DqProbe>& probes, std::int64_t target_prec);

/// f = A + f_tilde on B_r(x0) with Lip(f_tilde) < ||A^{-1}||^{-1}: the data of
/// the quantitative inverse theorem. Bounds a, b and the inverse Lipschitz
/// bound are computed at construction.
struct InverseProblem {
    PadicMatrix a;
    PadicMatrix a_inv;
    PolyMap f_tilde;
    Ball domain;
    Rational lip_tilde;
    Rational bound_a;      // ||A^{-1}||^{-1} - Lip(f_tilde)
    Rational bound_b;      // ||A|| + Lip(f_tilde)
    Rational lip_inverse;  // 1 / bound_a
    Rational contraction;  // ||A^{-1}|| Lip(f_tilde), the iteration factor
    bool certified = true; // Lip(f_tilde) < ||A^{-1}||^{-1} verified

    PadicVector apply(const PadicVector& y) const; // f(y) = A y + f_tilde(y)
};

InverseProblem make_inverse_problem(PadicMatrix a, PolyMap f_tilde, Ball domain);

/// Same data without the Lipschitz-budget check: for negative controls whose
/// enumeration is expected to expose the failure.
InverseProblem make_inverse_problem_unchecked(PadicMatrix a, PolyMap f_tilde, Ball domain);

struct ImageBallBounds {
    Rational a, b, lip_inverse;
};
ImageBallBounds image_ball_bounds(const InverseProblem& prob);

struct InvertPointResult {
    PadicVector y;
    std::size_t iterations = 0;
    bool in_guarantee_zone = false; // z in B_{a r}(f(center))
    std::int64_t residual_precision = 0;
};

/// Solves f(y) = z by the Newton-type iteration y <- y + A^{-1}(z - f(y)).
/// Attempted even outside the guaranteed zone, with escape detection.
InvertPointResult lipschitz_invert(const InverseProblem& prob, const PadicVector& z,
                                   std::int64_t target_prec);

struct ExactImageResult {
    bool equal = false;
    std::size_t classes_checked = 0;
    std::optional<std::string> counterexample; // residue key + side
};

/// Exhaustively checks f(B_s(y)) = shift + A.B_s(0) as residue sets mod p^n
/// (shift defaults to f(y), the exact-image identity). Enumeration runs at a
/// finer precision so every image class is well defined.
ExactImageResult verify_exact_image(const InverseProblem& prob, const PadicVector& y,
                                    std::int64_t s_exp, std::int64_t n, std::uint64_t cap,
                                    const std::optional<PadicVector>& rhs_shift = std::nullopt);

struct ImplicitEntry {
    PadicVector x;
    std::optional<PadicVector> lambda;
    bool certified = false; // probe inside the certified U_0
    std::string status;     // "ok" | "escaped" | ...
    std::size_t iterations = 0;
    std::int64_t residual_precision = 0;
};

struct ImplicitResult {
    PadicMatrix a;              // df/dy (x0, y0)
    std::int64_t u0_radius_exp; // certified parameter radius
    Rational contraction_q;     // ||A^{-1}|| L_y < 1 certificate
    Rational lip_y_budget;      // L_y
    std::vector<ImplicitEntry> entries;
};

/// Solves f(x, lambda(x)) = 0 near (x0, y0) for probes x; y ranges in the ball
/// y_domain around y0. The certified U_0 radius is the largest p-power for
/// which the Lipschitz budget and the reach condition hold (conservative).
ImplicitResult implicit_solve(const PolyMap& f, std::size_t x_dim, const PadicVector& x0,
                              const PadicVector& y0, const Ball& y_domain,
                              const std::vector<PadicVector>& probes, std::int64_t target_prec);

struct ParametricProbe {
    PadicVector p, v;
};
struct ParametricEntry {
    PadicVector p, v;
    std::optional<PadicVector> psi;
    bool certified = false;
    std::string status;
    std::size_t iterations = 0;
    std::int64_t residual_precision = 0;
};
struct ParametricResult {
    PadicMatrix a;
    std::int64_t p_radius_exp;
    Rational contraction_q;
    std::vector<ParametricEntry> entries;
};

/// psi(p, v) with f(p, psi(p, v)) = v near (p0, y0); certified over the
/// computed P-ball and for v with A^{-1}(v - f(p0,y0)) inside the y-ball.
ParametricResult parametric_inverse(const PolyMap& f, std::size_t p_dim, const PadicVector& p0,
                                    const PadicVector& y0, const Ball& y_domain,
                                    const std::vector<ParametricProbe>& probes,
                                    std::int64_t target_prec);

/// Largest number of guaranteed digits from an error bound: max n with
/// bound <= p^{-n} (kInfValuation when bound == 0).
std::int64_t digits_from_bound(std::uint32_t p, const Rational& bound);

} // namespace padic
