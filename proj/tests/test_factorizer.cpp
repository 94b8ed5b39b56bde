#include <doctest.h>

#include "generators.hpp"

using namespace rloop;
using rloop::testing::Rng;

namespace {

std::vector<TowerScalar> vec(std::initializer_list<long> entries) {
    std::vector<TowerScalar> v;
    for (long e : entries) v.emplace_back(Rat(e));
    return v;
}

TowerScalar I() { return TowerScalar::i(); }

void check_journal(const FactorizationResult& res) {
    for (const auto& rec : res.journal) {
        switch (rec.kind) {
            case StepKind::Pole:
                CHECK(rec.pole_after < rec.pole_before);
                break;
            case StepKind::Zero:
                CHECK(rec.zero_after < rec.zero_before);
                break;
            case StepKind::Single:
                if (!rec.eps_after.a.empty())
                    CHECK(EpsilonTuple::cmp(rec.eps_after, rec.eps_before) < 0);
                break;
        }
    }
}

}  // namespace

TEST_CASE("epsilon tuples compare from the top") {
    EpsilonTuple a{{2, 1, 0}}, b{{1, 2, 0}}, c{{3, 0, 1}};
    CHECK(EpsilonTuple::cmp(a, b) < 0);
    CHECK(EpsilonTuple::cmp(b, a) > 0);
    CHECK(EpsilonTuple::cmp(a, c) < 0);
    CHECK(EpsilonTuple::cmp(a, a) == 0);
    CHECK(EpsilonTuple{{3, 0, 0}}.is_minimal());
    CHECK_FALSE(a.is_minimal());
}

TEST_CASE("filtration of a nilpotent element") {
    Mat n(2, 2);
    n.at(0, 1) = TowerScalar(1);
    RationalLoop g = nilpotent_loop(TowerScalar(0), 2, n);
    Filtration f = compute_filtration(g, TowerScalar(0));
    CHECK(f.r == 2);
    CHECK(f.K[0].dim() == 0);
    CHECK(f.K[3].dim() == 2);
    CHECK(f.eps.a.size() == 3);
    CHECK(f.eps.a[0] + f.eps.a[1] + f.eps.a[2] == 2);
}

TEST_CASE("empty factorization of the identity") {
    RationalLoop id = RationalLoop::identity(3);
    CHECK(factor_glnc(id).factors.empty());
    CHECK(factor_glnr(id).factors.empty());
    CHECK(factor_upq(id, 1, 2).factors.empty());
}

TEST_CASE("single-singularity reduction peels nilpotent factors") {
    Rng rng(109);
    Mat n0 = rloop::testing::random_nilpotent(rng, 2);
    RationalLoop g = nilpotent_loop(TowerScalar(1), 2, n0);
    SingleStep st = single_singularity_reduce(g, RealityMode::None);
    CHECK(st.factor.kind == ElementKind::M);
    CHECK((st.factor.loop * st.g_prime) == g);
    CHECK(st.g_prime.is_identity());  // one step suffices for a pure element

    CHECK_THROWS_AS(single_singularity_reduce(RationalLoop::identity(2), RealityMode::None),
                    AlreadyIdentity);
}

TEST_CASE("single-singularity reduction handles stacked orders") {
    Rng rng(113);
    for (int trial = 0; trial < 10; ++trial) {
        Mat n = rloop::testing::random_nilpotent(rng, 3);
        Mat m = rloop::testing::random_nilpotent(rng, 3);
        TowerScalar alpha = rloop::testing::random_scalar(rng, 2);
        RationalLoop g = nilpotent_loop(alpha, 1, n) * nilpotent_loop(alpha, 2, m);
        RationalLoop h = g;
        std::vector<SimpleElement> factors;
        int steps = 0;
        while (!h.is_identity()) {
            SingleStep st = single_singularity_reduce(h, RealityMode::None);
            factors.push_back(st.factor);
            h = st.g_prime;
            REQUIRE(++steps <= 12);
        }
        RationalLoop prod = RationalLoop::identity(3);
        for (const auto& f : factors) prod = prod * f.loop;
        CHECK(prod == g);
    }
}

TEST_CASE("plain factorization round-trips") {
    Mat n(2, 2);
    n.at(0, 1) = TowerScalar(1);
    RationalLoop g = nilpotent_loop(TowerScalar(0), 1, n) *
                     make_p(TowerScalar(0), TowerScalar(1), Subspace::line(vec({1, 0})),
                            Subspace::line(vec({0, 1})))
                         .loop;
    FactorizationResult res = factor_glnc(g);
    CHECK(res.product(2) == g);
    check_journal(res);

    // A loop with polynomial growth at infinity is rejected.
    PolyMat bad(2);
    bad.at(0, 0) = Poly::one();
    bad.at(1, 1) = Poly::linear(TowerScalar(1)) * Poly::linear(TowerScalar(1));
    RationalLoop not_negative = RationalLoop::make(std::move(bad), {{TowerScalar(1), 1}});
    CHECK_THROWS_AS(factor_glnc(not_negative), NotNegative);
}

TEST_CASE("plain factorization on random products") {
    Rng rng(127);
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_int_distribution<std::size_t> nd(2, 3);
        std::size_t n = nd(rng);
        std::uniform_int_distribution<int> cnt(1, 4);
        RationalLoop g = RationalLoop::identity(n);
        int c = cnt(rng);
        for (int k = 0; k < c; ++k) g = g * rloop::testing::random_glnc_element(rng, n).loop;
        FactorizationResult res = factor_glnc(g);
        CHECK(res.product(n) == g);
        check_journal(res);
        for (const auto& f : res.factors) validate(f);
    }
}

TEST_CASE("real-form factorization round-trips") {
    Mat n(2, 2);
    n.at(0, 1) = TowerScalar(2);
    RationalLoop g = make_q_glnr(I(), I() * TowerScalar(2), Subspace::line(vec({1, 0})),
                                 Subspace::line(vec({0, 1})))
                         .loop *
                     make_m(TowerScalar(0), 1, n, RealityMode::Glnr).loop;
    FactorizationResult res = factor_glnr(g);
    CHECK(res.product(2) == g);
    check_journal(res);
    for (const auto& f : res.factors) CHECK(f.loop.check_glnr_reality().ok);
}

TEST_CASE("real-form factorization of a single r element") {
    Mat col(2, 1);
    col.at(0, 0) = TowerScalar(1);
    col.at(1, 0) = -I();
    Subspace v = Subspace::span(2, col);
    RationalLoop g =
        make_r_glnr(I(), TowerScalar(Gauss(Rat(0), Rat(2))), v, Subspace::span(2, Mat(2, 0)))
            .loop;
    FactorizationResult res = factor_glnr(g);
    CHECK(res.product(2) == g);
    for (const auto& f : res.factors) CHECK(f.loop.check_glnr_reality().ok);
}

TEST_CASE("real-form factorization on random products") {
    Rng rng(131);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<std::size_t> nd(2, 3);
        std::size_t n = nd(rng);
        std::uniform_int_distribution<int> cnt(1, 3);
        RationalLoop g = RationalLoop::identity(n);
        int c = cnt(rng);
        for (int k = 0; k < c; ++k) g = g * rloop::testing::random_glnr_element(rng, n).loop;
        FactorizationResult res = factor_glnr(g);
        CHECK(res.product(n) == g);
        check_journal(res);
        for (const auto& f : res.factors) CHECK(f.loop.check_glnr_reality().ok);
    }
    Mat bad(2, 2);
    bad.at(0, 1) = I();
    CHECK_THROWS_AS(factor_glnr(nilpotent_loop(TowerScalar(0), 1, bad)), RealityViolated);
}

TEST_CASE("indefinite factorization of the worked product") {
    HermForm form(1, 1);
    Rng rng(137);
    Mat skew = rloop::testing::random_skew_nilpotent(rng, form);
    RationalLoop g = make_p_herm(I(), Subspace::line(vec({1, 0})), form).loop *
                     make_m(TowerScalar(0), 1, skew, RealityMode::Upq, 1, 1).loop;
    FactorizationResult res = factor_upq(g, 1, 1);
    CHECK(res.product(2) == g);
    check_journal(res);
    for (const auto& f : res.factors) CHECK(f.loop.check_upq_reality(form).ok);
}

TEST_CASE("indefinite factorization with a three-step factor") {
    HermForm form(1, 2);
    Subspace v_space = Subspace::line(vec({1, 0, 1}));
    auto u = vec({0, 0, 1});
    auto v = vec({0, 1, 0});
    std::vector<TowerScalar> w{TowerScalar(Rat(-1, 2)), TowerScalar(0), TowerScalar(Rat(-1, 2))};
    ThreeStep ts = build_three_step(v_space, u, v, w, form);
    RationalLoop g = make_n_upq(TowerScalar(0), 1, ts.n.matrix, v_space, form).loop;
    FactorizationResult res = factor_upq(g, 1, 2);
    CHECK(res.product(3) == g);
    check_journal(res);
    for (const auto& f : res.factors) CHECK(f.loop.check_upq_reality(form).ok);
}

TEST_CASE("indefinite factorization on random products") {
    Rng rng(139);
    for (int trial = 0; trial < 20; ++trial) {
        HermForm form = trial % 2 ? HermForm(1, 1) : HermForm(1, 2);
        std::size_t n = form.dim();
        std::uniform_int_distribution<int> cnt(1, 3);
        RationalLoop g = RationalLoop::identity(n);
        int c = cnt(rng);
        for (int k = 0; k < c; ++k)
            g = g * rloop::testing::random_upq_element(rng, form).loop;
        FactorizationResult res = factor_upq(g, form.p(), form.q());
        CHECK(res.product(n) == g);
        check_journal(res);
        for (const auto& f : res.factors) CHECK(f.loop.check_upq_reality(form).ok);
    }
}
