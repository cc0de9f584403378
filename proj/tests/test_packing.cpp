#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <apollo/packing.hpp>

#include <algorithm>
#include <map>
#include <vector>

using namespace apollo;

namespace {

std::map<Int, int> curvature_histogram(const PackingResult& res) {
    std::map<Int, int> h;
    for (const Circle& c : res.circles) h[num(c.curvature)]++;
    return h;
}

bool sorted_by_curvature_then_center(const std::vector<Circle>& cs) {
    return std::is_sorted(cs.begin(), cs.end(), [](const Circle& a, const Circle& b) {
        if (a.curvature != b.curvature) return a.curvature < b.curvature;
        if (a.cx != b.cx) return a.cx < b.cx;
        return a.cy < b.cy;
    });
}

}  // namespace

TEST_CASE("root classification") {
    PackingSpec bounded = make_packing_spec(Quadruple(-1, 2, 2, 3));
    CHECK(bounded.kind == PackingKind::Bounded);

    PackingSpec strip = make_packing_spec(Quadruple(0, 0, 1, 1));
    CHECK(strip.kind == PackingKind::Strip);
    CHECK(strip.period == 2);

    PackingSpec strip3 = make_packing_spec(Quadruple(0, 0, 3, 3));
    CHECK(strip3.period == Rat(2) / 3);

    CHECK_THROWS_AS(make_packing_spec(Quadruple(1, 2, 3, 4)), NonDescartesError);
    // valid quadruple, but a reflection lowers coordinate 1
    CHECK_THROWS_AS(make_packing_spec(Quadruple(15, 2, 2, 3)), InvalidRootError);
    // two zeros with negative curvatures never close up
    CHECK_THROWS_AS(make_packing_spec(Quadruple(0, 0, -1, -1)), InvalidRootError);
}

TEST_CASE("bounded seed placement is exact and tangent") {
    SeedConfiguration seed = seed_configuration(make_packing_spec(Quadruple(-1, 2, 2, 3)));
    CHECK(seed.circles[0].cx == 0);
    CHECK(seed.circles[0].cy == 0);
    CHECK(seed.circles[0].radius() == 1);
    CHECK(seed.circles[1].cx == Rat(-1) / 2);
    CHECK(seed.circles[1].cy == 0);
    CHECK(seed.circles[2].cx == Rat(1) / 2);
    CHECK(seed.circles[2].cy == 0);
    CHECK(seed.circles[3].cx == 0);
    CHECK(seed.circles[3].cy == Rat(2) / 3);
    for (const Circle& c : seed.circles) CHECK(c.depth == 0);

    TangencyReport rep = tangency_check_all_pairs(
        {seed.circles.begin(), seed.circles.end()});
    CHECK(rep.pairs_checked == 6);
    CHECK(rep.failures == 0);
}

TEST_CASE("bounded seed placement matches hand-solved coordinates") {
    SeedConfiguration seed =
        seed_configuration(make_packing_spec(Quadruple(-11, 21, 24, 28)));
    CHECK(seed.circles[1].cx == Rat(-10) / 231);
    CHECK(seed.circles[1].cy == 0);
    CHECK(seed.circles[2].cx == Rat(7) / 165);
    CHECK(seed.circles[2].cy == Rat(1) / 40);
    CHECK(seed.circles[3].cx == Rat(9) / 385);
    CHECK(seed.circles[3].cy == Rat(-1) / 20);
}

TEST_CASE("strip seed uses outward line normals") {
    SeedConfiguration seed = seed_configuration(make_packing_spec(Quadruple(0, 0, 1, 1)));
    CHECK(seed.circles[0].is_line);
    CHECK(seed.circles[0].cx == 0);
    CHECK(seed.circles[0].cy == -1);
    CHECK(seed.circles[0].line_offset == 0);
    CHECK(seed.circles[1].is_line);
    CHECK(seed.circles[1].cy == 1);
    CHECK(seed.circles[1].line_offset == 2);
    CHECK(seed.circles[2].cx == 0);
    CHECK(seed.circles[2].cy == 1);
    CHECK(seed.circles[3].cx == 2);
    CHECK(seed.circles[3].cy == 1);
    CHECK_THROWS_AS(seed.circles[0].radius(), DomainError);

    TangencyReport rep = tangency_check_all_pairs(
        {seed.circles.begin(), seed.circles.end()});
    // four line/circle contacts, one circle/circle, and the line pair, which
    // counts as tangent at infinity because the normals are exactly opposite
    CHECK(rep.pairs_checked == 6);
    CHECK(rep.failures == 0);
}

TEST_CASE("bounded generation reproduces hand-enumerated packings") {
    PackingSpec spec = make_packing_spec(Quadruple(-1, 2, 2, 3));

    PackingResult small = generate(spec, Rat(4));
    CHECK(small.circles.size() == 5);

    PackingResult ten = generate(spec, Rat(10));
    REQUIRE(ten.circles.size() == 9);
    auto h = curvature_histogram(ten);
    CHECK(h[Int(-1)] == 1);
    CHECK(h[Int(2)] == 2);
    CHECK(h[Int(3)] == 2);
    CHECK(h[Int(6)] == 4);
    CHECK(sorted_by_curvature_then_center(ten.circles));

    PackingResult hundred = generate(spec, Rat(100));
    CHECK(hundred.circles.size() == 169);
    CHECK(hundred.tangencies.size() == 6 + 3 * (169 - 4));
    CHECK(tangency_check(hundred.circles, hundred.tangencies).failures == 0);
}

TEST_CASE("sparse bounded root") {
    PackingSpec spec = make_packing_spec(Quadruple(-11, 21, 24, 28));
    CHECK(generate(spec, Rat(100)).circles.size() == 10);
    PackingResult res = generate(spec, Rat(1000));
    CHECK(res.circles.size() == 144);
    CHECK(tangency_check(res.circles, res.tangencies).failures == 0);
}

TEST_CASE("strip generation restricts to one period window") {
    PackingSpec spec = make_packing_spec(Quadruple(0, 0, 1, 1));

    PackingResult tiny = generate(spec, Rat(2));
    CHECK(tiny.circles.size() == 3);

    PackingResult five = generate(spec, Rat(5));
    REQUIRE(five.circles.size() == 5);
    CHECK(five.circles[0].is_line);
    CHECK(five.circles[1].is_line);
    // the two curvature-4 circles of the first window
    CHECK(five.circles[3].curvature == 4);
    CHECK(five.circles[3].cx == 1);
    CHECK(five.circles[3].cy == Rat(1) / 4);
    CHECK(five.circles[4].cx == 1);
    CHECK(five.circles[4].cy == Rat(7) / 4);

    PackingResult res = generate(spec, Rat(100));
    CHECK(res.circles.size() == 119);
    for (const Circle& c : res.circles) {
        if (c.is_line) continue;
        CHECK(c.cx >= 0);
        CHECK(c.cx < 2);
        CHECK(c.cy > 0);
        CHECK(c.cy < 2);
    }
    CHECK(tangency_check(res.circles, res.tangencies).failures == 0);
    CHECK(generate(spec, Rat(1000)).circles.size() == 2337);
}

TEST_CASE("fractional cutoffs cut between integer curvatures") {
    PackingSpec spec = make_packing_spec(Quadruple(-1, 2, 2, 3));
    CHECK(generate(spec, Rat(21) / 2).circles.size() ==
          generate(spec, Rat(11)).circles.size());
}

TEST_CASE("node budget aborts generation") {
    PackingSpec spec = make_packing_spec(Quadruple(-1, 2, 2, 3));
    GenerateOptions opts;
    opts.max_nodes = 10;
    CHECK_THROWS_AS(generate(spec, Rat(100000), opts), BudgetExceededError);
}

TEST_CASE("wide arithmetic path agrees with the fast path") {
    PackingSpec spec = make_packing_spec(Quadruple(-1, 2, 2, 3));
    GenerateOptions wide;
    wide.force_wide_arithmetic = true;
    PackingResult a = generate(spec, Rat(100));
    PackingResult b = generate(spec, Rat(100), wide);
    REQUIRE(a.circles.size() == b.circles.size());
    for (std::size_t i = 0; i < a.circles.size(); ++i) {
        CHECK(a.circles[i].curvature == b.circles[i].curvature);
        CHECK(a.circles[i].cx == b.circles[i].cx);
        CHECK(a.circles[i].cy == b.circles[i].cy);
    }
    CHECK(a.tangencies == b.tangencies);
}

TEST_CASE("tangency checker flags broken pairs") {
    SeedConfiguration seed = seed_configuration(make_packing_spec(Quadruple(-1, 2, 2, 3)));
    std::vector<Circle> cs(seed.circles.begin(), seed.circles.end());
    cs[3].cx += Rat(1, 1000);
    TangencyReport rep = tangency_check(cs, {{0, 3}, {1, 2}});
    CHECK(rep.pairs_checked == 2);
    CHECK(rep.failures == 1);
    CHECK(rep.details.size() == 1);
    CHECK_THROWS_AS(tangency_check(cs, {{0, 7}}), ValidationError);
}
