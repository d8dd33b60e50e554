#pragma once

#include <vector>

#include "padicnla/unipoly.hpp"

namespace padic {

/// Root-valuation data of a polynomial over Q_p, read off the lower convex
/// hull of the points (i, v(c_i)). Multiplicities count roots in the algebraic
/// closure; the sum of multiplicities plus the zero-root block equals the
/// degree. Root absolute values are p^{-valuation}.
struct NewtonPolygon {
    /// X^k factor from exact-zero low coefficients (roots of valuation +inf).
    std::int64_t zero_root_multiplicity = 0;
    /// (root valuation, multiplicity), ascending by valuation.
    std::vector<std::pair<Rational, std::int64_t>> slopes;

    std::int64_t total_finite_multiplicity() const;
    /// Sum of valuation * multiplicity = v(c_0 / c_d) when there is no zero root.
    Rational valuation_sum() const;
};

/// Computes the polygon. Coefficients that are only apparently zero make some
/// hull locations uncertain; the hull is certified by comparing the hulls with
/// those points at their valuation bound and with them removed, and a
/// PrecisionError is thrown when they disagree. Requires an invertible leading
/// coefficient.
NewtonPolygon newton_polygon_slopes(const UniPoly& f);

} // namespace padic
