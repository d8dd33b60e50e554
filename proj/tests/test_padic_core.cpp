#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "padicnla/json_io.hpp"

using namespace padic;
using testutil::Q;
using testutil::S;
using testutil::V;

TEST_CASE("base-5 carry: 2 + 3 = 5") {
    const PadicScalar s = S(5, 2, 10) + S(5, 3, 10);
    CHECK(s.valuation() == 1);
    CHECK(s.digits()[0] == 1);
    CHECK(s.agrees(S(5, 5, 10)));
}

TEST_CASE("additive identity and 75 + 50 = 125") {
    const PadicScalar x = S(5, 42, 12);
    CHECK((x + PadicScalar::zero(5)) == x);
    const PadicScalar s = S(5, 75, 12) + S(5, 50, 12);
    CHECK(s.valuation() == 3);
    CHECK(s.agrees(S(5, 125, 12)));
}

TEST_CASE("geometric series inverse: 1/(1-5) has all digits 1") {
    const PadicScalar inv = (S(5, 1, 6) - S(5, 5, 6)).invert();
    for (const auto d : inv.digits()) CHECK(d == 1);
    // oracle: multiply back by -4 and compare with 1 mod 5^6
    CHECK((inv * S(5, -4, 6)).agrees_mod(S(5, 1, 6), 6));
}

TEST_CASE("multiplicative identity and 5 * 5") {
    const PadicScalar x = Q(5, 7, 3, 10);
    CHECK((x * S(5, 1, 10)).agrees(x));
    const PadicScalar s = S(5, 5, 10) * S(5, 5, 10);
    CHECK(s.valuation() == 2);
    CHECK(s.digits()[0] == 1);
}

TEST_CASE("inverting an apparent zero fails") {
    CHECK_THROWS_AS(PadicScalar::apparent_zero(5, 3).invert(), PrecisionError);
    CHECK_THROWS_AS(PadicScalar::zero(5).invert(), PrecisionError);
}

TEST_CASE("prime mismatch is rejected") {
    CHECK_THROWS_AS(S(5, 1, 4) + S(3, 1, 4), PrimeMismatch);
}

TEST_CASE("absolute values") {
    CHECK(S(5, 75, 10).abs_value() == Rational(1, 25));
    CHECK(PadicScalar::zero(5).abs_value() == 0);
    // strict ultrametric case: |2 + 3| = 1/5 < max(|2|, |3|) = 1
    CHECK((S(5, 2, 10) + S(5, 3, 10)).abs_value() == Rational(1, 5));
}

TEST_CASE("vector max-norm") {
    CHECK(V(5, {5, 25, 1}).norm() == 1);
    CHECK(PadicVector::zero(5, 3).norm() == 0);
    CHECK(V(5, {25, 125}).norm() == Rational(1, 25));
}

TEST_CASE("ball residue enumeration") {
    SUBCASE("B_1(0) in Q_5 mod 5^2: multiples of 5") {
        const auto pts = enumerate_ball_residues(Ball{PadicVector::zero(5, 1), 0}, 2);
        REQUIRE(pts.size() == 5);
        std::set<std::string> keys;
        for (const auto& v : pts) keys.insert(v.residue_key(2));
        CHECK(keys == std::set<std::string>{"0", "5", "10", "15", "20"});
    }
    SUBCASE("B_5(0) mod 5: all residues") {
        const auto pts = enumerate_ball_residues(Ball{PadicVector::zero(5, 1), 1}, 1);
        CHECK(pts.size() == 5);
    }
    SUBCASE("two-dimensional count") {
        const auto pts = enumerate_ball_residues(Ball{PadicVector::zero(5, 2), 0}, 2);
        CHECK(pts.size() == 25);
    }
    SUBCASE("cap enforced") {
        CHECK_THROWS_AS(enumerate_ball_residues(Ball{PadicVector::zero(5, 2), 1}, 6, 1000),
                        CapExceeded);
    }
    SUBCASE("indexed access matches the stream") {
        const Ball b{V(5, {3, 10}), 0};
        const auto pts = enumerate_ball_residues(b, 2);
        for (std::size_t i = 0; i < pts.size(); ++i)
            CHECK(ball_residue_by_index(b, 2, Integer(static_cast<unsigned long>(i)))
                      .residue_key(2) == pts[i].residue_key(2));
    }
}

TEST_CASE("ball membership via valuations") {
    const Ball b{PadicVector::zero(5, 1), 0}; // |y| < 1 <=> v >= 1
    CHECK(b.contains(V(5, {5})));
    CHECK(b.contains(V(5, {0})));
    CHECK(!b.contains(V(5, {1})));
    CHECK(!b.contains(V(5, {3})));
}

TEST_CASE("ultrametric axioms on exhaustive 2-digit scalars") {
    for (const std::uint32_t p : {2u, 3u, 5u}) {
        std::vector<PadicScalar> xs;
        for (std::int64_t v = -2; v <= 2; ++v)
            for (std::uint32_t d0 = 1; d0 < p; ++d0)
                for (std::uint32_t d1 = 0; d1 < p; ++d1)
                    xs.push_back(PadicScalar::from_unit(p, v, Integer(d0 + d1 * p), 2));
        for (const auto& a : xs)
            for (const auto& b : xs) {
                const Rational na = a.abs_value(), nb = b.abs_value();
                REQUIRE((a + b).abs_value() <= std::max(na, nb));
                if (na != nb) REQUIRE((a + b).abs_value() == std::max(na, nb));
                REQUIRE((a * b).abs_value() == na * nb);
            }
    }
}

TEST_CASE("ultrametric axioms on random samples") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 5000; ++i) {
        const std::uint32_t p = (i % 3 == 0) ? 2 : (i % 3 == 1 ? 3 : 5);
        const PadicScalar a = testutil::random_scalar(rng, p);
        const PadicScalar b = testutil::random_scalar(rng, p);
        const Rational na = a.abs_value(), nb = b.abs_value();
        REQUIRE((a + b).abs_value() <= std::max(na, nb));
        if (na != nb) REQUIRE((a + b).abs_value() == std::max(na, nb));
        REQUIRE((a * b).abs_value() == na * nb);
    }
}

TEST_CASE("precision soundness: recomputation at higher precision agrees") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 500; ++i) {
        std::uniform_int_distribution<long> cd(-50, 50);
        const long a = cd(rng), b = cd(rng), c = cd(rng) | 1;
        auto expr = [&](std::int64_t prec) {
            return (S(5, a, prec) * S(5, b, prec) + S(5, c, prec)) * S(5, c, prec).invert();
        };
        const PadicScalar lo = expr(8), hi = expr(20);
        if (lo.is_zero_at_precision() || hi.is_zero_at_precision()) continue;
        REQUIRE(hi.agrees_mod(lo, std::min(lo.abs_precision(), hi.abs_precision())));
    }
}

TEST_CASE("serialization round trip is the identity on canonical scalars") {
    std::mt19937_64 rng(99);
    const io::ParseCtx ctx{5, 32};
    for (int i = 0; i < 300; ++i) {
        const PadicScalar x = testutil::random_scalar(rng, 5);
        const PadicScalar back = io::scalar_from_json(io::to_json(x), ctx);
        REQUIRE(back == x);
    }
    // distinguished values
    for (const PadicScalar& x :
         {PadicScalar::zero(5), PadicScalar::apparent_zero(5, 7), Q(5, -3, 175, 12)})
        CHECK(io::scalar_from_json(io::to_json(x), ctx) == x);
}

TEST_CASE("exact zero is distinct from an apparent zero") {
    const PadicScalar ez = PadicScalar::zero(5);
    const PadicScalar az = PadicScalar::apparent_zero(5, 6);
    CHECK(ez.is_exact_zero());
    CHECK(!az.is_exact_zero());
    CHECK(az.is_zero_at_precision());
    CHECK(ez != az);
    // difference of equal-looking values is apparent, not exact
    const PadicScalar d = S(5, 2, 6) - S(5, 2, 6);
    CHECK(d.is_apparent_zero());
    CHECK(d.abs_precision() == 6);
}

TEST_CASE("unsupported primes are rejected") {
    CHECK_THROWS_AS(PadicScalar::from_integer(4, 1, 8), InputError);
    CHECK_THROWS_AS(PadicScalar::from_integer(1, 1, 8), InputError);
    CHECK_THROWS_AS(PadicScalar::from_integer(65537, 1, 8), InputError); // >= 2^16
    CHECK_NOTHROW(PadicScalar::from_integer(65521, 1, 8));               // largest supported
}

TEST_CASE("human-readable form") {
    CHECK(S(5, 75, 4).to_string() == "...3 x 5^2 (mod 5^4)");
    CHECK(PadicScalar::zero(5).to_string() == "0");
    CHECK(PadicScalar::apparent_zero(5, 3).to_string() == "O(5^3)");
}
