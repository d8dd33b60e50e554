#pragma once

#include <random>

#include "padicnla/calculus.hpp"
#include "padicnla/vector.hpp"

namespace testutil {

using namespace padic;

inline PadicScalar S(std::uint32_t p, long n, std::int64_t prec = 32) {
    return PadicScalar::from_integer(p, n, prec);
}

inline PadicScalar Q(std::uint32_t p, long num, long den, std::int64_t prec = 32) {
    return PadicScalar::from_rational(p, Integer(num), Integer(den), prec);
}

inline PadicVector V(std::uint32_t p, std::initializer_list<long> xs, std::int64_t prec = 32) {
    std::vector<PadicScalar> v;
    for (long x : xs) v.push_back(S(p, x, prec));
    return PadicVector(std::move(v));
}

/// Random canonical scalar: valuation in [-3, 3], rel known digits.
inline PadicScalar random_scalar(std::mt19937_64& rng, std::uint32_t p, std::int64_t rel = 6) {
    std::uniform_int_distribution<std::int64_t> vdist(-3, 3);
    std::uniform_int_distribution<std::uint32_t> ddist(0, p - 1);
    Integer u = 1 + ddist(rng) % (p - 1);
    Integer pw(p);
    for (std::int64_t i = 1; i < rel; ++i) {
        u += pw * ddist(rng);
        pw *= p;
    }
    return PadicScalar::from_unit(p, vdist(rng), u, rel);
}

/// Sparse random polynomial with small integer coefficients.
inline Poly random_poly(std::mt19937_64& rng, std::size_t nvars, std::uint32_t p, int max_deg,
                        std::int64_t prec = 24) {
    std::uniform_int_distribution<int> terms_dist(1, 4), cdist(-9, 9), edist(0, max_deg);
    Poly q(nvars);
    const int terms = terms_dist(rng);
    for (int t = 0; t < terms; ++t) {
        Poly::Exps e(nvars, 0);
        int budget = max_deg;
        for (std::size_t i = 0; i < nvars; ++i) {
            const int d = edist(rng) % (budget + 1);
            e[i] = static_cast<std::uint32_t>(d);
            budget -= d;
        }
        q.add_term(e, S(p, cdist(rng), prec));
    }
    return q;
}

inline PolyMap random_polymap(std::mt19937_64& rng, std::size_t nin, std::size_t nout,
                              std::uint32_t p, int max_deg, std::int64_t prec = 24) {
    std::vector<Poly> coords;
    for (std::size_t i = 0; i < nout; ++i)
        coords.push_back(random_poly(rng, nin, p, max_deg, prec));
    return PolyMap(std::move(coords));
}

} // namespace testutil
