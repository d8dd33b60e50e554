#pragma once

#include "padicnla/polymap.hpp"
#include "padicnla/vector.hpp"

namespace padic {

/// A point of the extended domain: (x, y, t) with x and x + t y in the domain
/// of interest. The domain_checked tag records whether containment was
/// actually verified against a ball.
struct ExtendedTriple {
    PadicVector x, y;
    PadicScalar t;
    bool domain_checked = false;
};

ExtendedTriple make_triple(PadicVector x, PadicVector y, PadicScalar t);
/// Verifies x and x + t y lie in the ball before tagging.
ExtendedTriple make_triple_in(const Ball& domain, PadicVector x, PadicVector y, PadicScalar t);

/// The extended difference quotient of f as a polynomial map h on 2n+1
/// variables (x_1..x_n, y_1..y_n, t):
///   h(x,y,t) = (f(x+ty) - f(x)) / t,
/// computed by symbolic division (exact for polynomials; the t^0 terms cancel
/// identically). h(x,y,0) is the directional derivative df(x,y), and iterating
/// the construction realizes the smoothness recursion literally.
PolyMap extended_map(const PolyMap& f);

/// Difference quotient at a triple: the literal quotient when t is invertible
/// at precision (dividing by t lowers the precision transparently); the
/// symbolic extension otherwise (t = 0 or indistinguishable from it).
PadicVector difference_quotient(const PolyMap& f, const ExtendedTriple& triple);

/// The literal quotient (f(x+ty) - f(x))/t; requires invertible t. Retained
/// for consistency testing against the symbolic route.
PadicVector literal_quotient(const PolyMap& f, const PadicVector& x, const PadicVector& y,
                             const PadicScalar& t);

/// df(x, y) = h(x, y, 0).
PadicVector directional_derivative(const PolyMap& f, const PadicVector& x, const PadicVector& y);

/// D_y f as a polynomial map in x (y numeric): sum_i (d_i f) y_i.
PolyMap directional_derivative_map(const PolyMap& f, const PadicVector& y);

/// d^j f(x; y_1, ..., y_j), symmetric j-linear in the directions.
PadicVector iterated_derivative(const PolyMap& f, const PadicVector& x,
                                const std::vector<PadicVector>& directions);

/// Exact expansion f(x+ty) = sum_{j<=k} t^j a_j(x,y) + t^k R_k(x,y,t).
/// a_j is collected from powers of t (no division by j!); the identity
/// j! a_j = d^j f(x; y,..,y) is verified internally for j <= k.
struct TaylorData {
    std::vector<PadicVector> a;        // a_0 .. a_k
    std::vector<PadicVector> r_coeffs; // R_k = sum_i t^{i+1} r_coeffs[i]; empty when R_k = 0
};
TaylorData taylor_data(const PolyMap& f, const PadicVector& x, const PadicVector& y,
                       std::size_t k);

/// Certified Lipschitz data on a ball: upper from the ultrametric monomial
/// estimate (max over monomials of |coeff| * radius-powers after recentering),
/// sampled_lower from displacement quotients over a residue sample. Always
/// sampled_lower <= Lip(f) <= upper.
struct LipschitzBound {
    Rational upper;
    Rational sampled_lower;
};
LipschitzBound lipschitz_bound(const PolyMap& f, const Ball& domain,
                               std::int64_t sample_mod_exp = 3, std::uint64_t cap = 4096);

/// Certified upper bound only (no sampling).
Rational lipschitz_upper(const PolyMap& f, const Ball& domain);

/// Uniform Lipschitz bound in one variable block over a product of
/// origin-centered balls: |f(.., u, ..) - f(.., u', ..)| <= L |u - u'|.
struct BlockSpec {
    std::size_t first = 0, count = 0;
    std::int64_t radius_exp = 0;
};
Rational lipschitz_upper_block(const PolyMap& f, const std::vector<BlockSpec>& blocks,
                               std::size_t diff_block);

/// Chain rule check: (f o g)^[1](x,y,t) == f^[1](g(x), g^[1](x,y,t), t),
/// both sides evaluated exactly and compared at shared precision.
bool chain_identity_check(const PolyMap& f, const PolyMap& g, const ExtendedTriple& triple);

} // namespace padic
