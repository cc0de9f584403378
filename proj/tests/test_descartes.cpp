#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <apollo/descartes.hpp>

using namespace apollo;

TEST_CASE("quadratic form vanishes exactly on tangent configurations") {
    CHECK(eval_form(Quadruple(-1, 2, 2, 3)) == 0);
    CHECK(eval_form(Quadruple(0, 0, 1, 1)) == 0);
    CHECK(eval_form(Quadruple(-11, 21, 24, 28)) == 0);
    CHECK(eval_form(Quadruple(1, 2, 3, 4)) != 0);
}

TEST_CASE("bilinear form polarizes the quadratic form") {
    std::array<Rat, 4> x{Rat(1) / 3, Rat(-2), Rat(5) / 7, Rat(4)};
    std::array<Rat, 4> y{Rat(2), Rat(1) / 2, Rat(-3) / 5, Rat(0)};
    std::array<Rat, 4> sum;
    for (int i = 0; i < 4; ++i) sum[i] = x[i] + y[i];
    CHECK(eval_form(sum) ==
          eval_form(x) + eval_form(y) + 2 * bilinear_form(x, y));
}

TEST_CASE("generators act by the second Descartes root") {
    Quadruple root(-1, 2, 2, 3);
    CHECK(apply_generator(root, 1) == Quadruple(15, 2, 2, 3));
    // Slot 4 maps to 2(-1+2+2) - 3 = 3: the twin circle shares its curvature,
    // so the curvature-only orbit has a fixed point here.
    CHECK(apply_generator(root, 4) == root);

    for (int i = 1; i <= 4; ++i) {
        Quadruple v = apply_generator(root, i);
        CHECK(eval_form(v) == 0);
        CHECK(apply_generator(v, i) == root);
    }
}

TEST_CASE("reduction finds the root and a replayable word") {
    Quadruple root(-1, 2, 2, 3);
    Quadruple v = apply_generator(apply_generator(apply_generator(root, 3), 4), 2);
    Reduction red = reduce_to_root(v);
    CHECK(red.root == root);

    Quadruple replay = v;
    for (int g : red.word) replay = apply_generator(replay, g);
    CHECK(replay == root);

    Quadruple rebuilt = red.root;
    for (auto it = red.word.rbegin(); it != red.word.rend(); ++it)
        rebuilt = apply_generator(rebuilt, *it);
    CHECK(rebuilt == v);

    CHECK(reduce_to_root(Quadruple(-11, 21, 24, 28)).word.empty());
    CHECK_THROWS_AS(reduce_to_root(Quadruple(1, 2, 3, 4)), NonDescartesError);
}

TEST_CASE("partner curvatures complete a triple") {
    PartnerRoots p = descartes_partner(Rat(2), Rat(2), Rat(3));
    CHECK(p.is_rational);
    CHECK(p.radicand == 16);
    CHECK(p.plus == 15);
    CHECK(p.minus == -1);
    CHECK(p.sum == 14);

    PartnerRoots q = descartes_partner(Rat(1), Rat(1), Rat(1));
    CHECK(!q.is_rational);
    CHECK(q.radicand == 3);
    CHECK(q.sum == 6);

    PartnerRoots r = descartes_partner(Rat(1), Rat(2), Rat(3));
    CHECK(r.radicand == 11);

    CHECK_THROWS_AS(descartes_partner(Rat(-1), Rat(1), Rat(1)),
                    NoRealSolutionError);
}

TEST_CASE("augmented action preserves the row invariants") {
    AugmentedQuadruple w;
    w.curv = Quadruple(-1, 2, 2, 3);
    w.bx = {Rat(0), Rat(-1), Rat(1), Rat(0)};
    w.by = {Rat(0), Rat(0), Rat(0), Rat(2)};
    REQUIRE(augmented_invariants_ok(w));

    AugmentedQuadruple w1 = apply_generator_augmented(w, 1);
    CHECK(w1.curv == Quadruple(15, 2, 2, 3));
    CHECK(augmented_invariants_ok(w1));
    CHECK(apply_generator_augmented(w1, 1) == w);
}

TEST_CASE("augmented action handles line rows and recovers offsets") {
    AugmentedQuadruple s;
    s.curv = Quadruple(0, 0, 1, 1);
    s.line = {true, true, false, false};
    s.bx = {Rat(0), Rat(0), Rat(0), Rat(2)};
    s.by = {Rat(-1), Rat(1), Rat(1), Rat(1)};
    s.offset = {Rat(0), Rat(2), Rat(0), Rat(0)};
    REQUIRE(augmented_invariants_ok(s));

    // Reflecting away the y=0 line creates the curvature-4 circle at (1, 7/4).
    AugmentedQuadruple s1 = apply_generator_augmented(s, 1);
    CHECK(s1.curv[0] == 4);
    CHECK(!s1.line[0]);
    CHECK(s1.bx[0] == 4);
    CHECK(s1.by[0] == 7);
    CHECK(augmented_invariants_ok(s1));

    // The reverse step recreates the line, offset included.
    CHECK(apply_generator_augmented(s1, 1) == s);
}
