#include <doctest.h>

#include "helpers.hpp"

using namespace rloop;
using rloop::testing::Rng;

namespace {

TowerScalar gi(long re, long im) { return TowerScalar(Gauss(Rat(re), Rat(im))); }

}  // namespace

TEST_CASE("gaussian rational arithmetic") {
    CHECK(gi(1, 2) + gi(3, -1) == gi(4, 1));
    CHECK((TowerScalar(Rat(1, 2)) + TowerScalar::i()).conj() ==
          TowerScalar(Rat(1, 2)) - TowerScalar::i());
    CHECK(gi(1, 1) * gi(1, -1) == TowerScalar(2));
    CHECK_THROWS_AS(TowerScalar(0).inv(), DivisionByZero);
}

TEST_CASE("conjugation is an involution fixing reals") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        TowerScalar x = rloop::testing::random_tower_scalar(rng);
        CHECK(x.conj().conj() == x);
        if (x.is_real()) CHECK(x.conj() == x);
    }
}

TEST_CASE("field axioms on random triples") {
    Rng rng(17);
    for (int k = 0; k < 1000; ++k) {
        TowerScalar a = rloop::testing::random_scalar(rng);
        TowerScalar b = rloop::testing::random_scalar(rng);
        TowerScalar c = rloop::testing::random_scalar(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inv() == TowerScalar(1));
    }
}

TEST_CASE("field axioms with radicals") {
    Rng rng(19);
    for (int k = 0; k < 120; ++k) {
        TowerScalar a = rloop::testing::random_tower_scalar(rng);
        TowerScalar b = rloop::testing::random_tower_scalar(rng);
        TowerScalar c = rloop::testing::random_tower_scalar(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inv() == TowerScalar(1));
    }
}

TEST_CASE("conjugation is a ring automorphism") {
    Rng rng(23);
    for (int k = 0; k < 300; ++k) {
        TowerScalar a = rloop::testing::random_tower_scalar(rng);
        TowerScalar b = rloop::testing::random_tower_scalar(rng);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a + b).conj() == a.conj() + b.conj());
    }
}

TEST_CASE("square roots of positive rationals") {
    // Exact square: no tower extension.
    TowerScalar r = sqrt_positive_real(TowerScalar(Rat(9, 4)));
    CHECK(r == TowerScalar(Rat(3, 2)));
    CHECK(r.tower_levels() == 0);

    TowerScalar s2 = sqrt_positive_real(TowerScalar(2));
    CHECK(s2.tower_levels() == 1);
    CHECK(s2 * s2 == TowerScalar(2));
    CHECK(s2.sign() == 1);

    // Adjoining 3 on top of sqrt(2) gives a two-level tower.
    TowerScalar three = embed(TowerScalar(3), s2.tower());
    TowerScalar s3 = sqrt_positive_real(three);
    CHECK(s3.tower_levels() == 2);
    CHECK(s3 * s3 == TowerScalar(3));
    CHECK((s2 * s3) * (s2 * s3) == TowerScalar(6));

    CHECK_THROWS_AS(sqrt_positive_real(TowerScalar(-2)), NotPositiveReal);
    CHECK_THROWS_AS(sqrt_positive_real(TowerScalar::i()), NotPositiveReal);
}

TEST_CASE("square roots square back to the radicand") {
    Rng rng(29);
    for (int k = 0; k < 100; ++k) {
        Rat q = rloop::testing::random_rat(rng, 12, 7);
        if (q <= 0) continue;
        TowerScalar r = sqrt_positive_real(TowerScalar(q));
        CHECK(r * r == TowerScalar(q));
        CHECK(r.sign() == 1);
    }
}

TEST_CASE("radicand reduction folds square parts") {
    // sqrt(8) = 2 sqrt(2) and sqrt(1/2) live in the same tower as sqrt(2).
    TowerScalar a = sqrt_positive_real(TowerScalar(8));
    TowerScalar b = sqrt_positive_real(TowerScalar(2));
    CHECK(a == b * TowerScalar(2));
    TowerScalar c = sqrt_positive_real(TowerScalar(Rat(1, 2)));
    CHECK(c * TowerScalar(2) == b);
    // sqrt(6) collapses into the (2,3) tower without a third radical.
    TowerScalar s3 = sqrt_positive_real(TowerScalar(3));
    TowerScalar joint = b + s3;
    TowerScalar s6 = sqrt_positive_real(embed(TowerScalar(6), joint.tower()));
    CHECK(s6.tower_levels() == 2);
    CHECK(s6 == b * s3);
}

TEST_CASE("signs decide through interval refinement") {
    TowerScalar s2 = sqrt_positive_real(TowerScalar(2));
    TowerScalar s3 = sqrt_positive_real(TowerScalar(3));
    CHECK((s3 - s2).sign() == 1);
    CHECK((s2 - s3).sign() == -1);
    CHECK((TowerScalar(Rat(7, 5)) - s2).sign() == -1);
    CHECK((TowerScalar(Rat(3, 2)) - s2).sign() == 1);
    CHECK((s2 - s2).sign() == 0);
}

TEST_CASE("perfect squares in towers are detected") {
    TowerScalar s2 = sqrt_positive_real(TowerScalar(2));
    TowerScalar x = (TowerScalar(1) + s2) * (TowerScalar(1) + s2);
    TowerScalar root;
    REQUIRE(perfect_square_in_tower(x, &root));
    CHECK(root * root == x);
    TowerScalar not_square = TowerScalar(1) + s2;
    CHECK_FALSE(perfect_square_in_tower(not_square, &root));
    // Nested roots that denest: sqrt(3 + 2 sqrt(2)) = 1 + sqrt(2).
    TowerScalar y = TowerScalar(3) + s2 * TowerScalar(2);
    TowerScalar sy = sqrt_positive_real(y);
    CHECK(sy == TowerScalar(1) + s2);
}

TEST_CASE("value comparison orders by real then imaginary part") {
    CHECK(value_cmp(gi(0, 1), gi(1, 0)) < 0);
    CHECK(value_cmp(gi(1, -1), gi(1, 1)) < 0);
    CHECK(value_cmp(gi(2, 0), gi(2, 0)) == 0);
    TowerScalar s2 = sqrt_positive_real(TowerScalar(2));
    CHECK(value_cmp(s2, TowerScalar(Rat(3, 2))) < 0);
}

TEST_CASE("minimized drops unused radicals") {
    TowerScalar s2 = sqrt_positive_real(TowerScalar(2));
    TowerScalar x = s2 - s2 + TowerScalar(5);
    CHECK(x.minimized().tower_levels() == 0);
    CHECK(x == TowerScalar(5));
}
