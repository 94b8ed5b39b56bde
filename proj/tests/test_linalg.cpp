#include <doctest.h>

#include "helpers.hpp"

using namespace rloop;
using rloop::testing::Rng;
using rloop::testing::to_vec;

namespace {

std::vector<TowerScalar> vec(std::initializer_list<long> entries) {
    std::vector<TowerScalar> v;
    for (long e : entries) v.emplace_back(Rat(e));
    return v;
}

TowerScalar I() { return TowerScalar::i(); }

Mat mat2(std::initializer_list<long> rows) {
    Mat m(2, 2);
    auto it = rows.begin();
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) m.at(r, c) = TowerScalar(Rat(*it++));
    return m;
}

// Random isotropic line for the given form.
Subspace random_isotropic_line(Rng& rng, const HermForm& form) {
    std::size_t n = form.dim();
    for (;;) {
        auto iso = isotropic_vector_in(rloop::testing::random_subspace(rng, n, n), form);
        if (iso && !vec_is_zero(*iso)) return Subspace::line(*iso);
    }
}

}  // namespace

TEST_CASE("kernel, image and rank") {
    auto ki = rref_kernel_image(Mat::identity(2));
    CHECK(ki.rank == 2);
    CHECK(ki.kernel.dim() == 0);
    CHECK(ki.image == Subspace::full(2));

    Mat ones = mat2({1, 1, 1, 1});
    ki = rref_kernel_image(ones);
    CHECK(ki.rank == 1);
    CHECK(ki.kernel.contains(vec({1, -1})));
    CHECK(ki.image.contains(vec({1, 1})));

    Mat e12 = mat2({0, 1, 0, 0});
    ki = rref_kernel_image(e12);
    CHECK(ki.rank == 1);
    CHECK(ki.kernel == Subspace::line(vec({1, 0})));
    CHECK(ki.image == Subspace::line(vec({1, 0})));
}

TEST_CASE("complement picks standard vectors at non-pivot rows") {
    Subspace e1 = Subspace::line(vec({1, 0}));
    CHECK(complement(e1) == Subspace::line(vec({0, 1})));
    Subspace diag = Subspace::line(vec({1, 1}));
    CHECK(complement(diag) == Subspace::line(vec({0, 1})));
    Subspace zero = Subspace::span(3, Mat(3, 0));
    CHECK(complement(zero) == Subspace::full(3));
}

TEST_CASE("complement is a direct complement on random subspaces") {
    Rng rng(43);
    for (int k = 0; k < 500; ++k) {
        std::uniform_int_distribution<std::size_t> nd(1, 4);
        std::size_t n = nd(rng);
        std::uniform_int_distribution<std::size_t> dd(0, n);
        Subspace v = rloop::testing::random_subspace(rng, n, dd(rng));
        Subspace w = complement(v);
        CHECK(v.dim() + w.dim() == n);
        CHECK(Mat::hcat(v.basis(), w.basis()).rank() == n);
    }
}

TEST_CASE("conjugation split") {
    // span((i,0)) is conjugation-invariant with real basis (1,0).
    Mat col(2, 1);
    col.at(0, 0) = I();
    Subspace vi = Subspace::span(2, col);
    ConjSplit cs = conj_split(vi);
    CHECK(cs.inv_part == vi);
    REQUIRE(cs.real_basis.size() == 1);
    CHECK(cs.real_basis[0] == vec({1, 0}));
    CHECK(cs.w1.dim() == 0);

    // span((1,i)) meets its conjugate trivially.
    Mat col2(2, 1);
    col2.at(0, 0) = TowerScalar(1);
    col2.at(1, 0) = I();
    Subspace vni = Subspace::span(2, col2);
    cs = conj_split(vni);
    CHECK(cs.inv_part.dim() == 0);
    CHECK(cs.w1 == vni);

    cs = conj_split(Subspace::full(2));
    CHECK(cs.inv_part == Subspace::full(2));
}

TEST_CASE("conjugation split properties") {
    Rng rng(47);
    for (int k = 0; k < 200; ++k) {
        std::uniform_int_distribution<std::size_t> nd(1, 4);
        std::size_t n = nd(rng);
        std::uniform_int_distribution<std::size_t> dd(0, n);
        Subspace v = rloop::testing::random_subspace(rng, n, dd(rng));
        ConjSplit cs = conj_split(v);
        CHECK(cs.inv_part.conj() == cs.inv_part);
        CHECK(cs.inv_part.sum(cs.w1) == v);
        CHECK(cs.inv_part.dim() + cs.w1.dim() == v.dim());
        CHECK(cs.w1.intersect(cs.w1.conj()).dim() == 0);
        for (const auto& rb : cs.real_basis)
            for (const auto& x : rb) CHECK(x.is_real());
    }
}

TEST_CASE("orthogonal complements for the signature form") {
    HermForm form(1, 1);
    CHECK(orth_complement(Subspace::line(vec({1, 0})), form) == Subspace::line(vec({0, 1})));
    Subspace iso = Subspace::line(vec({1, 1}));
    CHECK(orth_complement(iso, form) == iso);
    CHECK(orth_complement(Subspace::full(2), form).dim() == 0);
}

TEST_CASE("orthogonal complement is an involution") {
    Rng rng(53);
    HermForm form(1, 2);
    for (int k = 0; k < 200; ++k) {
        std::uniform_int_distribution<std::size_t> dd(0, 3);
        Subspace v = rloop::testing::random_subspace(rng, 3, dd(rng));
        Subspace vperp = orth_complement(v, form);
        CHECK(v.dim() + vperp.dim() == 3);
        CHECK(orth_complement(vperp, form) == v);
    }
}

TEST_CASE("adjoint identity for the form") {
    Rng rng(59);
    HermForm form(1, 2);
    for (int k = 0; k < 100; ++k) {
        Mat a = rloop::testing::random_matrix(rng, 3, 3);
        auto v = to_vec(rloop::testing::random_matrix(rng, 3, 1));
        auto w = to_vec(rloop::testing::random_matrix(rng, 3, 1));
        CHECK(form.inner(a.apply(v), w) == form.inner(v, form.adjoint(a).apply(w)));
    }
}

TEST_CASE("isotropic vectors") {
    HermForm form(1, 1);
    auto v = isotropic_vector_in(Subspace::full(2), form);
    REQUIRE(v.has_value());
    CHECK(*v == vec({1, 1}));
    CHECK_FALSE(isotropic_vector_in(Subspace::line(vec({0, 1})), form).has_value());

    // Restricted Gram diag(-1, 2): a Gaussian-rational isotropic vector
    // exists because 1/2 is a norm from Q(i).
    HermForm form12(1, 2);
    Mat basis(3, 2);
    basis.at(0, 0) = TowerScalar(1);
    basis.at(1, 1) = TowerScalar(1);
    basis.at(2, 1) = TowerScalar(1);
    Subspace v12 = Subspace::span(3, basis);
    auto iso = isotropic_vector_in(v12, form12);
    REQUIRE(iso.has_value());
    CHECK(form12.inner(*iso, *iso).is_zero());
    for (const auto& c : *iso) CHECK(c.tower_levels() == 0);

    // Restricted Gram diag(-3, 1) forces adjoining sqrt(3).
    Mat basis3(3, 2);
    basis3.at(0, 0) = TowerScalar(2);
    basis3.at(1, 0) = TowerScalar(1);
    basis3.at(2, 1) = TowerScalar(1);
    Subspace v3 = Subspace::span(3, basis3);
    auto iso3 = isotropic_vector_in(v3, form12);
    REQUIRE(iso3.has_value());
    CHECK(form12.inner(*iso3, *iso3).is_zero());
    std::size_t levels = 0;
    for (const auto& c : *iso3) levels += c.tower_levels();
    CHECK(levels > 0);
}

TEST_CASE("isotropic vector exists iff the restriction is indefinite or degenerate") {
    Rng rng(61);
    HermForm form(1, 2);
    for (int k = 0; k < 150; ++k) {
        std::uniform_int_distribution<std::size_t> dd(1, 3);
        Subspace v = rloop::testing::random_subspace(rng, 3, dd(rng));
        auto iso = isotropic_vector_in(v, form);
        bool definite = radical(v, form).dim() == 0;
        if (definite) {
            auto dg = congruence_diagonalize(v, form);
            int pos = 0, neg = 0;
            for (const auto& d : dg.values) (d.sign() > 0 ? pos : neg)++;
            definite = pos == 0 || neg == 0;
        }
        CHECK(iso.has_value() == !definite);
        if (iso) CHECK(form.inner(*iso, *iso).is_zero());
    }
}

TEST_CASE("skew nilpotent worked instance") {
    HermForm form(1, 1);
    Subspace v_space = Subspace::line(vec({1, 1}));
    auto v = vec({1, 1});
    std::vector<TowerScalar> w{I(), -I()};
    NilpotentMap nm = build_skew_nilpotent(v_space, v, w, form);
    Mat expect(2, 2);
    TowerScalar half_i = I() * TowerScalar(Rat(1, 2));
    expect.at(0, 0) = -half_i;
    expect.at(0, 1) = half_i;
    expect.at(1, 0) = -half_i;
    expect.at(1, 1) = half_i;
    CHECK(nm.matrix == expect);
    CHECK(nm.check(2));

    // Zero v gives the zero map.
    NilpotentMap zero = build_skew_nilpotent(v_space, vec({0, 0}), w, form);
    CHECK(zero.matrix.is_zero());

    // w inside V^perp is rejected.
    CHECK_THROWS_AS(build_skew_nilpotent(v_space, v, vec({1, 1}), form), PreconditionViolated);
}

TEST_CASE("skew nilpotent postconditions on random data") {
    Rng rng(67);
    for (int k = 0; k < 100; ++k) {
        bool small = k % 2 == 0;
        HermForm form = small ? HermForm(1, 1) : HermForm(1, 2);
        std::size_t n = form.dim();
        Subspace v_space = random_isotropic_line(rng, form);
        auto b = v_space.basis_vector(0);
        auto v = vec_scale(rloop::testing::random_scalar(rng, 3), b);
        Subspace vperp = orth_complement(v_space, form);
        std::vector<TowerScalar> w;
        for (;;) {
            auto w0 = to_vec(rloop::testing::random_matrix(rng, n, 1));
            if (vperp.contains(w0)) continue;
            TowerScalar z = form.inner(v, w0);
            if (z.is_zero()) {
                w = w0;
            } else {
                // Rotate the pairing onto the imaginary axis.
                w = vec_scale(TowerScalar::i() * z.conj(), w0);
                if (vperp.contains(w)) continue;
            }
            break;
        }
        NilpotentMap nm = build_skew_nilpotent(v_space, v, w, form);
        CHECK((nm.matrix * nm.matrix).is_zero());
        CHECK(form.adjoint(nm.matrix) == -nm.matrix);
        CHECK(nm.matrix.apply(w) == v);
        for (std::size_t j = 0; j < vperp.dim(); ++j)
            CHECK(vec_is_zero(nm.matrix.apply(vperp.basis_vector(j))));
        CHECK(v_space.contains(rref_kernel_image(nm.matrix).image));
    }
}

TEST_CASE("three-step worked instance") {
    HermForm form(1, 2);
    Subspace v_space = Subspace::line(vec({1, 0, 1}));
    auto u = vec({0, 0, 1});
    auto v = vec({0, 1, 0});
    std::vector<TowerScalar> w{TowerScalar(Rat(-1, 2)), TowerScalar(0), TowerScalar(Rat(-1, 2))};
    ThreeStep ts = build_three_step(v_space, u, v, w, form);
    CHECK(ts.m.apply(v) == vec({1, 0, 1}));
    CHECK(ts.n.check(3));

    // w = 0 forces <v,v> = 0, which is impossible off V.
    Subspace vperp = orth_complement(v_space, form);
    auto viso = vec({1, 0, 1});
    CHECK_THROWS_AS(build_three_step(v_space, u, viso, vec({0, 0, 0}), form),
                    PreconditionViolated);
}

TEST_CASE("three-step postconditions on random data") {
    Rng rng(71);
    HermForm form(1, 2);
    Mat s = form.s_matrix();
    for (int k = 0; k < 100; ++k) {
        Subspace v_space = random_isotropic_line(rng, form);
        Subspace vperp = orth_complement(v_space, form);
        Subspace w_space = orth_complement(v_space.sum(v_space.image_under(s)), form);
        // v = isotropic-part + nonzero W-component.
        auto v = vec_add(vec_scale(rloop::testing::random_scalar(rng, 2),
                                   v_space.basis_vector(0)),
                         vec_scale(rloop::testing::random_nonzero_scalar(rng, 2),
                                   w_space.basis_vector(0)));
        TowerScalar vv = form.inner(v, v);
        if (vv.is_zero()) continue;
        auto u0 = to_vec(rloop::testing::random_matrix(rng, 3, 1));
        if (vperp.contains(u0)) continue;
        TowerScalar z = form.inner(u0, v_space.basis_vector(0));
        if (z.is_zero()) continue;
        TowerScalar coeff = -(vv / (TowerScalar(2) * z));
        auto w = vec_scale(coeff, v_space.basis_vector(0));
        TowerScalar uw = form.inner(u0, w);
        REQUIRE(uw.imag_part().is_zero());
        ThreeStep ts = build_three_step(v_space, u0, v, w, form);
        const Mat& nm = ts.n.matrix;
        Mat n2 = nm * nm;
        CHECK((n2 * nm).is_zero());
        CHECK(form.adjoint(nm) == -nm);
        auto lhs = vec_add(vec_add(vec_scale(TowerScalar(Rat(1, 2)), n2.apply(u0)),
                                   nm.apply(v)),
                           w);
        CHECK(vec_is_zero(lhs));
        // Mapping chain: sV -> W -> V -> 0.
        Subspace sv = v_space.image_under(s);
        CHECK(w_space.contains(sv.image_under(nm)));
        CHECK(v_space.contains(w_space.image_under(nm)));
        CHECK(v_space.image_under(nm).dim() == 0);
    }
}

TEST_CASE("isotropic search with a pairing constraint") {
    Rng rng(73);
    HermForm form(1, 2);
    for (int k = 0; k < 60; ++k) {
        Subspace v_space = random_isotropic_line(rng, form);
        auto target = v_space.basis_vector(0);
        Subspace kill = v_space;
        auto w = to_vec(rloop::testing::random_matrix(rng, 3, 1));
        auto vl = isotropic_with_pairing(target, kill, w, form);
        if (vl) {
            CHECK(is_isotropic(*vl, form));
            CHECK(vl->contains(target));
            CHECK(orth_complement(kill, form).contains(*vl));
            bool pairs = false;
            for (std::size_t j = 0; j < vl->dim(); ++j)
                if (!form.inner(w, vl->basis_vector(j)).is_zero()) pairs = true;
            CHECK(pairs);
        } else {
            // Complete search: w must be orthogonal to every isotropic
            // candidate subspace, in particular to the target line.
            CHECK(form.inner(w, target).is_zero());
        }
    }
}
