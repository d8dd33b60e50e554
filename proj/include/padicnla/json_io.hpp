#pragma once

#include <json.hpp>

#include "padicnla/manifolds.hpp"

namespace padic::io {

using Json = nlohmann::ordered_json;

/// Parsing context: the prime and the absolute precision at which shorthand
/// coefficients (integers, "num/den" strings) are embedded.
struct ParseCtx {
    std::uint32_t p = 0;
    std::int64_t precision = 32;
};

// Scalars: {"p": int, "val": int|"inf", "digits": [d0, d1, ...], "prec": int}
// (bit-exact round trip). Shorthand accepted on input: integer or "num/den".
Json to_json(const PadicScalar& s);
PadicScalar scalar_from_json(const Json& j, const ParseCtx& ctx);

Json to_json(const PadicVector& v);
PadicVector vector_from_json(const Json& j, const ParseCtx& ctx);

// {"rows": int, "cols": int, "entries": [[scalar, ...], ...]}
Json to_json(const PadicMatrix& m);
PadicMatrix matrix_from_json(const Json& j, const ParseCtx& ctx);

// {"center": [scalar, ...], "radius_exp": int}
Json to_json(const Ball& b);
Ball ball_from_json(const Json& j, const ParseCtx& ctx);

// {"dim_in": n, "dim_out": m, "coords": [[{"coeff": c, "exps": [..]}, ..], ..]}
Json to_json(const PolyMap& f);
PolyMap polymap_from_json(const Json& j, const ParseCtx& ctx);

Json to_json(const UniPoly& f);
UniPoly unipoly_from_json(const Json& j, const ParseCtx& ctx);

std::string rational_str(const Rational& q);
Rational rational_from_json(const Json& j);

} // namespace padic::io
