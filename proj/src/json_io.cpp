#include "padicnla/json_io.hpp"

namespace padic::io {

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw InputError("malformed input: " + what);
}

Rational parse_rational_str(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Rational q(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        bad("cannot parse rational '" + s + "'");
    }
}

} // namespace

std::string rational_str(const Rational& q) {
    return q.get_str();
}

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return parse_rational_str(j.get<std::string>());
    bad("expected a rational (integer or \"num/den\")");
}

Json to_json(const PadicScalar& s) {
    Json j;
    j["p"] = s.prime();
    if (s.is_exact_zero()) {
        j["val"] = "inf";
        j["digits"] = Json::array();
        j["prec"] = 0;
        return j;
    }
    j["val"] = s.valuation_lower_bound();
    j["digits"] = s.digits();
    j["prec"] = s.abs_precision();
    return j;
}

PadicScalar scalar_from_json(const Json& j, const ParseCtx& ctx) {
    if (j.is_number_integer())
        return PadicScalar::from_integer(ctx.p, Integer(static_cast<long>(j.get<std::int64_t>())),
                                         ctx.precision);
    if (j.is_string()) {
        const Rational q = parse_rational_str(j.get<std::string>());
        return PadicScalar::from_rational(ctx.p, q, ctx.precision);
    }
    if (!j.is_object()) bad("scalar must be an object, integer, or \"num/den\"");
    const std::uint32_t p = j.contains("p") ? j.at("p").get<std::uint32_t>() : ctx.p;
    if (j.at("val").is_string()) {
        if (j.at("val").get<std::string>() != "inf") bad("scalar val must be int or \"inf\"");
        return PadicScalar::zero(p);
    }
    const std::int64_t val = j.at("val").get<std::int64_t>();
    const std::int64_t prec = j.at("prec").get<std::int64_t>();
    const auto digits = j.at("digits").get<std::vector<std::uint32_t>>();
    if (digits.empty()) {
        if (val != prec) bad("apparent zero must have val == prec");
        return PadicScalar::apparent_zero(p, prec);
    }
    if (static_cast<std::int64_t>(digits.size()) != prec - val)
        bad("digit count must equal prec - val");
    Integer unit = 0;
    for (std::size_t i = digits.size(); i > 0; --i) {
        if (digits[i - 1] >= p) bad("digit out of range");
        unit = unit * p + digits[i - 1];
    }
    if (digits[0] == 0) bad("canonical scalar needs d_0 != 0");
    return PadicScalar::from_unit(p, val, unit, prec - val);
}

Json to_json(const PadicVector& v) {
    Json j = Json::array();
    for (const auto& e : v.entries()) j.push_back(to_json(e));
    return j;
}

PadicVector vector_from_json(const Json& j, const ParseCtx& ctx) {
    if (!j.is_array()) bad("vector must be an array of scalars");
    std::vector<PadicScalar> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(scalar_from_json(e, ctx));
    return PadicVector(std::move(v));
}

Json to_json(const PadicMatrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m.at(i, k)));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

PadicMatrix matrix_from_json(const Json& j, const ParseCtx& ctx) {
    if (!j.is_object() || !j.contains("entries")) bad("matrix needs rows/cols/entries");
    const auto& e = j.at("entries");
    if (!e.is_array()) bad("matrix entries must be an array of rows");
    std::vector<std::vector<PadicScalar>> rows;
    for (const auto& r : e) {
        if (!r.is_array()) bad("matrix row must be an array");
        std::vector<PadicScalar> row;
        for (const auto& x : r) row.push_back(scalar_from_json(x, ctx));
        rows.push_back(std::move(row));
    }
    PadicMatrix m(std::move(rows));
    if (j.contains("rows") && j.at("rows").get<std::size_t>() != m.rows())
        bad("matrix rows field disagrees with entries");
    if (j.contains("cols") && j.at("cols").get<std::size_t>() != m.cols())
        bad("matrix cols field disagrees with entries");
    return m;
}

Json to_json(const Ball& b) {
    Json j;
    j["center"] = to_json(b.center);
    j["radius_exp"] = b.radius_exp;
    return j;
}

Ball ball_from_json(const Json& j, const ParseCtx& ctx) {
    if (!j.is_object() || !j.contains("center") || !j.contains("radius_exp"))
        bad("ball needs center and radius_exp");
    return Ball{vector_from_json(j.at("center"), ctx), j.at("radius_exp").get<std::int64_t>()};
}

Json to_json(const PolyMap& f) {
    Json j;
    j["dim_in"] = f.dim_in();
    j["dim_out"] = f.dim_out();
    Json coords = Json::array();
    for (std::size_t i = 0; i < f.dim_out(); ++i) {
        Json terms = Json::array();
        for (const auto& [e, c] : f.coord(i).terms()) {
            Json t;
            t["coeff"] = to_json(c);
            t["exps"] = e;
            terms.push_back(std::move(t));
        }
        coords.push_back(std::move(terms));
    }
    j["coords"] = std::move(coords);
    return j;
}

PolyMap polymap_from_json(const Json& j, const ParseCtx& ctx) {
    if (!j.is_object() || !j.contains("dim_in") || !j.contains("coords"))
        bad("polynomial map needs dim_in and coords");
    const std::size_t n = j.at("dim_in").get<std::size_t>();
    const auto& coords = j.at("coords");
    if (!coords.is_array() || coords.empty()) bad("coords must be a non-empty array");
    if (j.contains("dim_out") && j.at("dim_out").get<std::size_t>() != coords.size())
        bad("dim_out disagrees with coords");
    std::vector<Poly> out;
    for (const auto& cj : coords) {
        Poly q(n);
        if (!cj.is_array()) bad("coordinate must be an array of terms");
        for (const auto& t : cj) {
            if (!t.is_object() || !t.contains("coeff") || !t.contains("exps"))
                bad("term needs coeff and exps");
            const auto exps = t.at("exps").get<std::vector<std::uint32_t>>();
            if (exps.size() != n) bad("term exps arity disagrees with dim_in");
            q.add_term(exps, scalar_from_json(t.at("coeff"), ctx));
        }
        out.push_back(std::move(q));
    }
    return PolyMap(std::move(out));
}

Json to_json(const UniPoly& f) {
    Json j = Json::array();
    for (const auto& c : f.coeffs()) j.push_back(to_json(c));
    return j;
}

UniPoly unipoly_from_json(const Json& j, const ParseCtx& ctx) {
    if (!j.is_array()) bad("polynomial must be an array of coefficients (ascending)");
    std::vector<PadicScalar> c;
    for (const auto& e : j) c.push_back(scalar_from_json(e, ctx));
    return UniPoly(std::move(c));
}

} // namespace padic::io
