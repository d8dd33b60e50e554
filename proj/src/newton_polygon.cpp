#include "padicnla/newton_polygon.hpp"

#include <algorithm>

namespace padic {

std::int64_t NewtonPolygon::total_finite_multiplicity() const {
    std::int64_t m = 0;
    for (const auto& [s, k] : slopes) m += k;
    return m;
}

Rational NewtonPolygon::valuation_sum() const {
    Rational s(0);
    for (const auto& [w, k] : slopes) s += w * Rational(static_cast<long>(k));
    return s;
}

namespace {

struct Pt {
    std::int64_t x, y;
};

// slope(AB) >= slope(BC), with x strictly increasing.
bool pop_middle(const Pt& a, const Pt& b, const Pt& c) {
    return (b.y - a.y) * (c.x - b.x) >= (c.y - b.y) * (b.x - a.x);
}

std::vector<Pt> lower_hull(const std::vector<Pt>& pts) {
    std::vector<Pt> h;
    for (const Pt& p : pts) {
        while (h.size() >= 2 && pop_middle(h[h.size() - 2], h.back(), p)) h.pop_back();
        h.push_back(p);
    }
    return h;
}

bool same_hull(const std::vector<Pt>& a, const std::vector<Pt>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
    return true;
}

} // namespace

NewtonPolygon newton_polygon_slopes(const UniPoly& f) {
    const std::int64_t deg = f.degree();
    if (deg < 0) throw PrecisionError("newton polygon of a zero polynomial");
    if (!f.leading().is_invertible_at_precision())
        throw PrecisionError("newton polygon requires an invertible leading coefficient");
    if (static_cast<std::size_t>(deg) + 1 != f.size() &&
        std::any_of(f.coeffs().begin() + deg + 1, f.coeffs().end(),
                    [](const PadicScalar& c) { return !c.is_exact_zero(); }))
        throw PrecisionError("newton polygon: degree uncertain (apparent-zero top coefficients)");

    NewtonPolygon out;

    // Strip the exact-zero low block: an X^k factor.
    std::size_t k = 0;
    while (k < static_cast<std::size_t>(deg) && f[k].is_exact_zero()) ++k;
    out.zero_root_multiplicity = static_cast<std::int64_t>(k);

    std::vector<Pt> certain;
    std::vector<Pt> with_bounds;
    for (std::size_t i = k; i <= static_cast<std::size_t>(deg); ++i) {
        const PadicScalar& c = f[i];
        if (c.is_exact_zero()) continue;
        const Pt pt{static_cast<std::int64_t>(i), c.valuation_lower_bound()};
        with_bounds.push_back(pt);
        if (c.is_invertible_at_precision()) certain.push_back(pt);
    }
    if (certain.empty() || certain.front().x != static_cast<std::int64_t>(k))
        throw PrecisionError("newton polygon: lowest coefficient only apparently zero");

    const std::vector<Pt> h1 = lower_hull(certain);
    const std::vector<Pt> h2 = lower_hull(with_bounds);
    if (!same_hull(h1, h2))
        throw PrecisionError("newton polygon uncertain: apparent-zero coefficients could move "
                             "the hull; increase the working precision");

    for (std::size_t i = 0; i + 1 < h1.size(); ++i) {
        const Pt& a = h1[i];
        const Pt& b = h1[i + 1];
        Rational w(a.y - b.y, b.x - a.x); // root valuation = -(hull slope)
        w.canonicalize();
        out.slopes.emplace_back(std::move(w), b.x - a.x);
    }
    std::sort(out.slopes.begin(), out.slopes.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
}

} // namespace padic
