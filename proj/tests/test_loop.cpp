#include <doctest.h>

#include "helpers.hpp"
#include "rloop/simple_elements.hpp"

using namespace rloop;
using rloop::testing::Rng;

namespace {

std::vector<TowerScalar> vec(std::initializer_list<long> entries) {
    std::vector<TowerScalar> v;
    for (long e : entries) v.emplace_back(Rat(e));
    return v;
}

Mat e12(std::size_t n = 2) {
    Mat m(n, n);
    m.at(0, 1) = TowerScalar(1);
    return m;
}

RationalLoop p01() {
    return make_p(TowerScalar(0), TowerScalar(1), Subspace::line(vec({1, 0})),
                  Subspace::line(vec({0, 1})))
        .loop;
}

RationalLoop random_simple_product(Rng& rng, std::size_t n, int count) {
    RationalLoop g = RationalLoop::identity(n);
    std::uniform_int_distribution<int> kind(0, 1);
    std::uniform_int_distribution<int> kval(1, 2);
    for (int k = 0; k < count; ++k) {
        if (kind(rng) == 0) {
            std::uniform_int_distribution<std::size_t> dd(1, n - 1);
            std::size_t dim = dd(rng);
            Subspace v = rloop::testing::random_subspace(rng, n, dim);
            Subspace w = complement(v);
            TowerScalar alpha = rloop::testing::random_scalar(rng, 2);
            TowerScalar beta = rloop::testing::random_scalar(rng, 2);
            if (alpha == beta) beta = beta + TowerScalar(1);
            g = g * make_p(alpha, beta, v, w).loop;
        } else {
            g = g * make_m(rloop::testing::random_scalar(rng, 2), kval(rng),
                           rloop::testing::random_nilpotent(rng, n))
                        .loop;
        }
    }
    return g;
}

}  // namespace

TEST_CASE("identity and closed-form inverses multiply out") {
    RationalLoop g = p01();
    CHECK(RationalLoop::identity(2) * g == g);
    RationalLoop m = nilpotent_loop(TowerScalar(1), 1, e12());
    RationalLoop minv = nilpotent_loop(TowerScalar(1), 1, -e12());
    CHECK((m * minv).is_identity());
    RationalLoop m23 = nilpotent_loop(TowerScalar(2), 3, e12());
    RatFunc det = m23.det();
    CHECK(det == RatFunc(TowerScalar(1)));
}

TEST_CASE("entries come back in canonical form") {
    RationalLoop g = p01();
    RatFunc tl = g.entry(0, 0);
    CHECK(tl.num() == Poly::linear(TowerScalar(0)));
    CHECK(tl.den() == Poly::linear(TowerScalar(1)));
    CHECK(g.entry(1, 1) == RatFunc(TowerScalar(1)));
    CHECK(g.entry(0, 1).is_zero());
}

TEST_CASE("from_entries round-trips the factored form") {
    Rng rng(79);
    for (int k = 0; k < 20; ++k) {
        RationalLoop g = random_simple_product(rng, 2, 2);
        std::vector<std::vector<RatFunc>> entries(2);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) entries[r].push_back(g.entry(r, c));
        RationalLoop back = RationalLoop::from_entries(entries, g.hints());
        CHECK(back == g);
    }
}

TEST_CASE("singularities of the basic elements") {
    RationalLoop g = p01();
    auto sings = g.singularities();
    REQUIRE(sings.size() == 2);
    bool saw_pole = false, saw_zero = false;
    for (const auto& s : sings) {
        if (s.is_pole) {
            saw_pole = true;
            CHECK(s.location == TowerScalar(1));
            CHECK(s.pole.k == 1);
            CHECK(s.pole.rank == 1);
        } else {
            saw_zero = true;
            CHECK(s.location == TowerScalar(0));
            CHECK(s.zero_order == 1);
        }
    }
    CHECK(saw_pole);
    CHECK(saw_zero);

    RationalLoop m23 = nilpotent_loop(TowerScalar(2), 3, e12());
    sings = m23.singularities();
    REQUIRE(sings.size() == 1);
    CHECK(sings[0].is_pole);
    CHECK(sings[0].location == TowerScalar(2));
    CHECK(sings[0].pole.k == 3);
    CHECK(sings[0].pole.rank == 1);

    CHECK(RationalLoop::identity(3).singularities().empty());
}

TEST_CASE("moebius expansion around a pole") {
    PolyMat num(1);
    num.at(0, 0) = Poly::one();
    RationalLoop g = RationalLoop::make(num, {{TowerScalar(0), 1}});
    auto coeffs = g.moebius_laurent(TowerScalar(0), TowerScalar(1), -2, 2);
    CHECK(coeffs[0].at(0, 0) == TowerScalar(0));
    CHECK(coeffs[1].at(0, 0) == TowerScalar(-1));
    CHECK(coeffs[2].at(0, 0) == TowerScalar(1));
    CHECK(coeffs[3].at(0, 0) == TowerScalar(0));
    CHECK(coeffs[4].at(0, 0) == TowerScalar(0));

    RationalLoop p = p01();
    auto c2 = p.moebius_laurent(TowerScalar(0), TowerScalar(1), 0, 2);
    Mat piv(2, 2), piw(2, 2);
    piv.at(0, 0) = TowerScalar(1);
    piw.at(1, 1) = TowerScalar(1);
    CHECK(c2[0] == piw);
    CHECK(c2[1] == piv);
    CHECK(c2[2].is_zero());

    auto cid = RationalLoop::identity(2).moebius_laurent(TowerScalar(0), TowerScalar(1), 0, 1);
    CHECK(cid[0].is_identity());
    CHECK(cid[1].is_zero());

    CHECK_THROWS_AS(p.moebius_laurent(TowerScalar(0), TowerScalar(1), 1, 0), BadWindow);
}

TEST_CASE("moebius leading index matches the pole order") {
    Rng rng(83);
    for (int k = 0; k < 25; ++k) {
        RationalLoop g = random_simple_product(rng, 2, 3);
        for (const auto& s : g.singularities()) {
            if (!s.is_pole) continue;
            TowerScalar beta = s.location + TowerScalar(1);
            while (g.is_pole_at(beta)) beta = beta + TowerScalar(1);
            auto c = g.moebius_laurent(s.location, beta, -s.pole.k, -s.pole.k);
            CHECK_FALSE(c[0].is_zero());
            CHECK(c[0].rank() == static_cast<std::size_t>(s.pole.rank));
        }
    }
}

TEST_CASE("principal parts") {
    Mat n = e12();
    RationalLoop m2 = nilpotent_loop(TowerScalar(1), 2, n);
    auto parts = m2.principal_part(TowerScalar(1));
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].is_identity());
    CHECK(parts[1].is_zero());
    CHECK(parts[2] == n);

    Mat m(2, 2);
    m.at(1, 0) = TowerScalar(1);
    RationalLoop prod =
        nilpotent_loop(TowerScalar(1), 1, n) * nilpotent_loop(TowerScalar(1), 1, m);
    parts = prod.principal_part(TowerScalar(1));
    REQUIRE(parts.size() == 3);
    CHECK(parts[1] == n + m);
    CHECK(parts[2] == n * m);

    auto id_parts = RationalLoop::identity(2).principal_part(TowerScalar(0));
    CHECK(id_parts.size() == 1);
    CHECK(id_parts[0].is_identity());
}

TEST_CASE("principal part reconstructs a single-pole loop") {
    Rng rng(89);
    for (int k = 0; k < 20; ++k) {
        TowerScalar alpha = rloop::testing::random_scalar(rng, 2);
        RationalLoop g = nilpotent_loop(alpha, 1, rloop::testing::random_nilpotent(rng, 3)) *
                         nilpotent_loop(alpha, 2, rloop::testing::random_nilpotent(rng, 3));
        auto parts = g.principal_part(alpha);
        PolyMat num(3);
        int kmax = static_cast<int>(parts.size()) - 1;
        for (int j = 0; j <= kmax; ++j) {
            Poly pow = Poly::one();
            for (int t = 0; t < kmax - j; ++t) pow = pow * Poly::linear(alpha);
            num = num + PolyMat::from_scalar(parts[j]) * pow;
        }
        RationalLoop back = RationalLoop::make(num, {{alpha, kmax}});
        CHECK(back == g);
    }
}

TEST_CASE("determinants are multiplicative and inverses are exact") {
    Rng rng(97);
    for (int k = 0; k < 30; ++k) {
        RationalLoop a = random_simple_product(rng, 2, 2);
        RationalLoop b = random_simple_product(rng, 2, 2);
        CHECK((a * b).det() == a.det() * b.det());
    }
    for (int k = 0; k < 100; ++k) {
        std::uniform_int_distribution<std::size_t> nd(2, 3);
        std::size_t n = nd(rng);
        RationalLoop g = random_simple_product(rng, n, 2);
        CHECK((g * g.inverse()).is_identity());
    }
}

TEST_CASE("negative single-singularity loops have det 1") {
    Rng rng(101);
    for (int k = 0; k < 20; ++k) {
        TowerScalar alpha = rloop::testing::random_scalar(rng, 2);
        RationalLoop g = nilpotent_loop(alpha, 1, rloop::testing::random_nilpotent(rng, 2)) *
                         nilpotent_loop(alpha, 2, rloop::testing::random_nilpotent(rng, 2));
        CHECK(g.det() == RatFunc(TowerScalar(1)));
        CHECK(g.is_negative());
    }
}

TEST_CASE("evaluation and poles") {
    RationalLoop g = p01();
    CHECK_THROWS_AS(g.eval(TowerScalar(1)), EvalAtPole);
    Mat at2 = g.eval(TowerScalar(2));
    CHECK(at2.at(0, 0) == TowerScalar(2));
    CHECK(at2.at(1, 1) == TowerScalar(1));
    auto inf = g.eval_at_infinity();
    REQUIRE(inf.has_value());
    CHECK(inf->is_identity());
}

TEST_CASE("reality and twisting checks") {
    Mat real_n(2, 2);
    real_n.at(0, 1) = TowerScalar(Rat(3, 2));
    RationalLoop m = nilpotent_loop(TowerScalar(1), 1, real_n);
    CHECK(m.check_glnr_reality().ok);

    Mat col(2, 1);
    col.at(0, 0) = TowerScalar(1);
    col.at(1, 0) = TowerScalar::i();
    Subspace v = Subspace::span(2, col);
    RationalLoop p = make_p(TowerScalar::i(), -TowerScalar::i(), v, complement(v)).loop;
    CHECK_FALSE(p.check_glnr_reality().ok);

    HermForm form(1, 1);
    Mat skew(2, 2);
    skew.at(0, 0) = -TowerScalar::i();
    skew.at(0, 1) = TowerScalar::i();
    skew.at(1, 0) = -TowerScalar::i();
    skew.at(1, 1) = TowerScalar::i();
    REQUIRE(form.is_skew(skew));
    REQUIRE((skew * skew).is_zero());
    RationalLoop ms = nilpotent_loop(TowerScalar(2), 1, skew);
    CHECK(ms.check_upq_reality(form).ok);
    CHECK_FALSE(ms.check_glnr_reality().ok);
}
