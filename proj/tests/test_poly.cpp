#include <doctest.h>

#include "helpers.hpp"

using namespace rloop;
using rloop::testing::Rng;

namespace {

Poly from_longs(std::initializer_list<long> cs) {
    std::vector<TowerScalar> v;
    for (long c : cs) v.emplace_back(Rat(c));
    return Poly(std::move(v));
}

Poly random_poly(Rng& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    int d = deg(rng);
    std::vector<TowerScalar> c(d + 1);
    for (auto& x : c) x = rloop::testing::random_scalar(rng, 4);
    return Poly(std::move(c));
}

}  // namespace

TEST_CASE("gcd of polynomials") {
    Poly a = from_longs({-1, 0, 1});  // x^2 - 1
    Poly b = from_longs({-1, 1});     // x - 1
    CHECK(poly_gcd(a, b) == b);

    Poly c = from_longs({1, 0, 1});  // x^2 + 1
    Poly d(std::vector<TowerScalar>{-TowerScalar::i(), TowerScalar(1)});  // x - i
    CHECK(poly_gcd(c, d) == d);

    CHECK(poly_gcd(from_longs({0, 0, 0, 1}), from_longs({0, 0, 1})) == from_longs({0, 0, 1}));
    CHECK_THROWS(poly_gcd(Poly::zero(), Poly::zero()));
}

TEST_CASE("rational function normalization") {
    RatFunc f(from_longs({-1, 0, 1}), from_longs({-1, 1}));
    CHECK(f == RatFunc(from_longs({1, 1})));  // x + 1

    RatFunc g(from_longs({0, 2}), from_longs({2}));
    CHECK(g == RatFunc(from_longs({0, 1})));

    RatFunc z(Poly::zero(), from_longs({0, 1}));
    CHECK(z.num().is_zero());
    CHECK(z.den() == Poly::one());

    CHECK_THROWS_AS(RatFunc(Poly::one(), Poly::zero()), ZeroDenominator);
}

TEST_CASE("normalization is idempotent and cancels common factors") {
    Rng rng(31);
    for (int k = 0; k < 150; ++k) {
        Poly a = random_poly(rng, 4);
        Poly b = random_poly(rng, 3);
        Poly c = random_poly(rng, 2);
        if (b.is_zero() || c.is_zero()) continue;
        RatFunc plain(a, b);
        RatFunc mult(a * c, b * c);
        CHECK(plain == mult);
        CHECK(RatFunc(plain.num(), plain.den()) == plain);
    }
}

TEST_CASE("evaluation with poles and at infinity") {
    RatFunc f(from_longs({0, 1}), from_longs({-1, 1}));  // x / (x - 1)
    CHECK(f.eval(TowerScalar(0)).value() == TowerScalar(0));
    CHECK_FALSE(f.eval(TowerScalar(1)).has_value());
    CHECK(f.eval_at_infinity().value() == TowerScalar(1));

    RatFunc g(from_longs({1}), from_longs({0, 1}));  // 1/x
    CHECK(g.eval_at_infinity().value() == TowerScalar(0));
    RatFunc h(from_longs({0, 0, 1}), from_longs({0, 1}));  // x^2/x = x
    CHECK_FALSE(h.eval_at_infinity().has_value());
}

TEST_CASE("rational function field operations") {
    Rng rng(37);
    for (int k = 0; k < 100; ++k) {
        Poly a = random_poly(rng, 3), b = random_poly(rng, 2);
        Poly c = random_poly(rng, 3), d = random_poly(rng, 2);
        if (b.is_zero() || d.is_zero()) continue;
        RatFunc f(a, b), g(c, d);
        CHECK(f + g - g == f);
        if (!g.is_zero()) CHECK(f * g / g == f);
    }
}

TEST_CASE("taylor shift and derivatives") {
    Rng rng(41);
    for (int k = 0; k < 60; ++k) {
        Poly p = random_poly(rng, 5);
        TowerScalar a = rloop::testing::random_scalar(rng, 3);
        Poly sh = p.shifted(a);
        TowerScalar x = rloop::testing::random_scalar(rng, 3);
        CHECK(sh.eval(x) == p.eval(a + x));
    }
    Poly p = from_longs({1, 2, 3});
    CHECK(p.derivative() == from_longs({2, 6}));
}

TEST_CASE("series inversion") {
    Poly u = from_longs({2, 1, 3});
    Poly inv = u.series_inverse(6);
    Poly prod = Poly::mul_trunc(u, inv, 6);
    CHECK(prod == Poly::one());
    CHECK_THROWS(from_longs({0, 1}).series_inverse(3));
}

TEST_CASE("root multiplicity") {
    Poly p = Poly::from_roots({TowerScalar(1), TowerScalar(1), TowerScalar(2)});
    Poly rest;
    CHECK(p.root_multiplicity(TowerScalar(1), &rest) == 2);
    CHECK(rest == Poly::linear(TowerScalar(2)));
    CHECK(p.root_multiplicity(TowerScalar(3)) == 0);
}
