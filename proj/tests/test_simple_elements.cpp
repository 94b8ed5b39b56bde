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

}  // namespace

TEST_CASE("p elements and their inverses") {
    SimpleElement p = make_p(TowerScalar(0), TowerScalar(1), Subspace::line(vec({1, 0})),
                             Subspace::line(vec({0, 1})));
    CHECK(p.loop.entry(0, 0) == RatFunc(Poly::linear(TowerScalar(0)), Poly::linear(TowerScalar(1))));
    CHECK(p.loop.entry(1, 1) == RatFunc(TowerScalar(1)));
    SimpleElement pinv = inverse_of(p);
    CHECK((p.loop * pinv.loop).is_identity());
    // det p = ((lambda - alpha)/(lambda - beta))^dim V.
    CHECK(p.loop.det() ==
          RatFunc(Poly::linear(TowerScalar(0)), Poly::linear(TowerScalar(1))));
}

TEST_CASE("hermitian p elements") {
    HermForm form(1, 1);
    // An isotropic V has V intersect V^perp nonzero and is rejected.
    CHECK_THROWS_AS(make_p_herm(I(), Subspace::line(vec({1, 1})), form), InvalidDecomposition);
    CHECK_THROWS_AS(make_p_herm(TowerScalar(1), Subspace::line(vec({1, 0})), form),
                    InvalidDecomposition);

    SimpleElement ph = make_p_herm(I(), Subspace::line(vec({1, 0})), form);
    CHECK(ph.loop.check_upq_reality(form).ok);
    SimpleElement phc = inverse_of(ph);
    CHECK((ph.loop * phc.loop).is_identity());
    CHECK(ph.loop.is_negative());
}

TEST_CASE("real-form q elements") {
    TowerScalar two_i = I() * TowerScalar(2);
    SimpleElement q = make_q_glnr(I(), two_i, Subspace::line(vec({1, 0})),
                                  Subspace::line(vec({0, 1})));
    // (1,1)-entry is (lambda-i)(lambda+i) / ((lambda-2i)(lambda+2i)).
    RatFunc e00 = q.loop.entry(0, 0);
    Poly num = Poly::linear(I()) * Poly::linear(-I());
    Poly den = Poly::linear(two_i) * Poly::linear(-two_i);
    CHECK(e00 == RatFunc(num, den));
    CHECK(q.loop.check_glnr_reality().ok);
    CHECK((q.loop * inverse_of(q).loop).is_identity());
}

TEST_CASE("real-form r elements accept an empty W") {
    Mat col(2, 1);
    col.at(0, 0) = TowerScalar(1);
    col.at(1, 0) = -I();
    Subspace v = Subspace::span(2, col);
    SimpleElement r = make_r_glnr(I(), TowerScalar(Gauss(Rat(0), Rat(2))), v,
                                  Subspace::span(2, Mat(2, 0)));
    CHECK(r.loop.check_glnr_reality().ok);
    CHECK((r.loop * inverse_of(r).loop).is_identity());
    CHECK(r.loop.is_negative());
}

TEST_CASE("indefinite q elements and the overlap identity") {
    HermForm form(1, 1);
    Subspace v = Subspace::line(vec({1, 1}));
    TowerScalar alpha(Gauss(Rat(1), Rat(1)));
    SimpleElement q = make_q_upq(alpha, alpha.conj(), v, form);
    CHECK(q.loop.check_upq_reality(form).ok);
    // q_{alpha, conj alpha, V} = p_{alpha, V + sV}.
    Mat s = form.s_matrix();
    SimpleElement ph = make_p_herm(alpha, v.sum(v.image_under(s)), form);
    CHECK(q.loop == ph.loop);

    SimpleElement q2 = make_q_upq(alpha, TowerScalar(2), v, form);
    CHECK(q2.loop.check_upq_reality(form).ok);
    CHECK((q2.loop * inverse_of(q2).loop).is_identity());
}

TEST_CASE("nilpotent m elements") {
    Mat n(2, 2);
    n.at(0, 1) = TowerScalar(1);
    SimpleElement m = make_m(TowerScalar(0), 1, n);
    CHECK(m.loop.entry(0, 1) == RatFunc(Poly::one(), Poly::linear(TowerScalar(0))));
    CHECK(m.loop.entry(0, 0) == RatFunc(TowerScalar(1)));
    Mat bad = Mat::identity(2);
    CHECK_THROWS_AS(make_m(TowerScalar(0), 1, bad), NotNilpotent);
    CHECK_THROWS_AS(make_m(I(), 1, n, RealityMode::Glnr), InvalidDecomposition);
    Mat cplx(2, 2);
    cplx.at(0, 1) = I();
    CHECK_THROWS_AS(make_m(TowerScalar(0), 1, cplx, RealityMode::Glnr), NotRealMatrix);
    CHECK_THROWS_AS(make_m(TowerScalar(0), 1, n, RealityMode::Upq, 1, 1), NotSkew);
}

TEST_CASE("three-step n elements from the worked construction") {
    HermForm form(1, 2);
    Subspace v_space = Subspace::line(vec({1, 0, 1}));
    auto u = vec({0, 0, 1});
    auto v = vec({0, 1, 0});
    std::vector<TowerScalar> w{TowerScalar(Rat(-1, 2)), TowerScalar(0), TowerScalar(Rat(-1, 2))};
    ThreeStep ts = build_three_step(v_space, u, v, w, form);
    SimpleElement ne = make_n_upq(TowerScalar(0), 1, ts.n.matrix, v_space, form);
    CHECK(ne.loop.check_upq_reality(form).ok);
    CHECK(ne.loop.det() == RatFunc(TowerScalar(1)));
    CHECK((ne.loop * inverse_of(ne).loop).is_identity());
    CHECK(ne.loop.is_negative());
}

TEST_CASE("twisted pair worked instance") {
    Mat n(2, 2);
    n.at(0, 1) = TowerScalar(1);
    SimpleElement s = make_twisted_pair(TowerScalar(1), n);
    Mat expect(2, 2);
    expect.at(0, 0) = TowerScalar(Rat(-2, 5));
    expect.at(0, 1) = TowerScalar(Rat(-1, 5));
    expect.at(1, 0) = TowerScalar(Rat(4, 5));
    expect.at(1, 1) = TowerScalar(Rat(2, 5));
    CHECK(s.Nprime == expect);
    CHECK((s.Nprime * s.Nprime).is_zero());
    CHECK(s.loop.check_twisted().ok);
    CHECK(s.loop.check_glnr_reality().ok);
    CHECK(s.loop.det() == RatFunc(TowerScalar(1)));

    // Zero nilpotent gives the identity pair.
    SimpleElement s0 = make_twisted_pair(TowerScalar(1), Mat(2, 2));
    CHECK(s0.loop.is_identity());
    CHECK(s0.Nprime.is_zero());

    // N = 2i E12 makes Id + N^t N / 4 singular.
    Mat bad(2, 2);
    bad.at(0, 1) = I() * TowerScalar(2);
    CHECK_THROWS_AS(make_twisted_pair(TowerScalar(1), bad), NotWellDefined);
    CHECK_THROWS_AS(make_twisted_pair(TowerScalar(0), n), AlphaZero);
}

TEST_CASE("every kind satisfies its promised conditions") {
    Rng rng(103);
    for (int k = 0; k < 40; ++k) {
        SimpleElement e = rloop::testing::random_glnc_element(rng, 3);
        CHECK(e.loop.is_negative());
        CHECK((e.loop * inverse_of(e).loop).is_identity());
        validate(e);
    }
    for (int k = 0; k < 40; ++k) {
        SimpleElement e = rloop::testing::random_glnr_element(rng, 3);
        CHECK(e.loop.check_glnr_reality().ok);
        CHECK(e.loop.is_negative());
        CHECK((e.loop * inverse_of(e).loop).is_identity());
        validate(e);
    }
    for (int k = 0; k < 40; ++k) {
        HermForm form = k % 2 ? HermForm(1, 1) : HermForm(1, 2);
        SimpleElement e = rloop::testing::random_upq_element(rng, form);
        CHECK(e.loop.check_upq_reality(form).ok);
        CHECK(e.loop.is_negative());
        CHECK((e.loop * inverse_of(e).loop).is_identity());
        validate(e);
    }
}

TEST_CASE("nilpotent kinds have unit determinant") {
    Rng rng(107);
    for (int k = 0; k < 20; ++k) {
        SimpleElement m = make_m(rloop::testing::random_scalar(rng, 2), 2,
                                 rloop::testing::random_nilpotent(rng, 3));
        CHECK(m.loop.det() == RatFunc(TowerScalar(1)));
    }
}
