#pragma once

#include <optional>
#include <utility>

#include "padicnla/newton_polygon.hpp"

namespace padic {

/// Eigenvalue-criterion witness: alpha is a-hyperbolic iff no eigenvalue over
/// the algebraic closure has |lambda| = a, read off the Newton polygon of the
/// characteristic polynomial.
struct HyperbolicityReport {
    bool hyperbolic = false;
    /// (valuation, multiplicity) groups of eigenvalues; |lambda| = p^{-valuation}.
    std::vector<std::pair<Rational, std::int64_t>> eigenvalue_valuations;
    /// Set when not hyperbolic: the valuation with p^{-v} == a.
    std::optional<Rational> offending_valuation;
};

HyperbolicityReport is_a_hyperbolic(const PadicMatrix& alpha, const Rational& a);

/// An a-adapted decomposition E = E_1 (+) E_2 into alpha-invariant subspaces
/// with ||alpha_1|| < a and ||alpha_2^{-1}||^{-1} > a in the adapted basis.
/// All inequalities are verified on the emitted blocks before return.
struct HyperbolicSplitting {
    Rational a;
    std::size_t dim1 = 0, dim2 = 0;
    std::vector<PadicVector> basis1, basis2; // adapted basis, original coordinates
    PadicMatrix alpha1, alpha2;              // blocks in the adapted basis
    PadicMatrix change_of_basis;             // columns = basis1 | basis2
    PadicMatrix change_of_basis_inv;

    // certificates
    Rational norm_alpha1{0};     // < a, or 0 for an empty contracting block
    Rational norm_alpha2_inv{0}; // ||alpha2^{-1}|| < 1/a, or 0 for an empty block
    bool norm_adapted = false;   // a diagonal rescaling step was needed
    std::int64_t power_used = 1; // alpha^w used to reach an integer threshold
    std::int64_t threshold_used = 0;
    Rational resultant_valuation_expected{0};
    Rational resultant_valuation_actual{0};
    bool factored = false; // false for the degenerate whole-space cases
};

/// Splits alpha at level a (requires is_a_hyperbolic). Characteristic
/// polynomial is factored by quadratic Hensel lifting along the Newton
/// polygon; E_1 = ker f_1(alpha^w), E_2 = ker f_2(alpha^w). Throws
/// PrecisionError when the available digits cannot certify the lift and
/// CertificateError when hyperbolicity or a norm bound fails.
HyperbolicSplitting hyperbolic_splitting(const PadicMatrix& alpha, const Rational& a);

/// Factor a monic polynomial as g * h where g carries the roots of valuation
/// > k and h those of valuation < k (no root valuation may equal k). Exposed
/// for direct testing of the lift.
std::pair<UniPoly, UniPoly> hensel_slope_split(const UniPoly& monic_f, std::int64_t k);

} // namespace padic
