#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <apollo/serialize.hpp>

#include <cstdlib>
#include <sstream>
#include <string>

using namespace apollo;

namespace {

std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("doubles format to the shortest round-tripping decimal") {
    for (double v : {0.1, 1.0 / 3.0, 1e300, 2.5e-17, -0.0, 123456789.0,
                     1.3056800000000001, 6.02e23}) {
        std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("circle lists round-trip through csv exactly") {
    auto res = generate(make_packing_spec(Quadruple(-1, 2, 2, 3)), Rat(50));
    std::ostringstream out;
    write_circles_csv(out, res.circles);
    std::string text = out.str();
    CHECK(text.rfind("curvature,center_x,center_y,radius,depth", 0) == 0);

    std::istringstream in(text);
    auto back = read_circles_csv(in);
    REQUIRE(back.size() == res.circles.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].curvature == res.circles[i].curvature);
        CHECK(back[i].cx == res.circles[i].cx);
        CHECK(back[i].cy == res.circles[i].cy);
        CHECK(back[i].depth == res.circles[i].depth);
        CHECK(back[i].is_line == res.circles[i].is_line);
    }
}

TEST_CASE("strip csv keeps the lines and their offsets") {
    auto res = generate(make_packing_spec(Quadruple(0, 0, 1, 1)), Rat(30));
    std::ostringstream out;
    write_circles_csv(out, res.circles);
    std::istringstream in(out.str());
    auto back = read_circles_csv(in);
    REQUIRE(back.size() == res.circles.size());
    CHECK(back[0].is_line);
    CHECK(back[1].is_line);
    CHECK(back[0].line_offset == res.circles[0].line_offset);
    CHECK(back[1].line_offset == res.circles[1].line_offset);
    CHECK(back[1].cy == 1);
}

TEST_CASE("malformed circle csv is rejected") {
    std::istringstream bad_header("nope\n1,0,0,1,0\n");
    CHECK_THROWS_AS(read_circles_csv(bad_header), IoError);

    std::istringstream short_row(
        "curvature,center_x,center_y,radius,depth\n1,0,0\n");
    CHECK_THROWS_AS(read_circles_csv(short_row), IoError);

    std::istringstream garbage(
        "curvature,center_x,center_y,radius,depth\nx,0,0,1,0\n");
    CHECK_THROWS_AS(read_circles_csv(garbage), IoError);
}

TEST_CASE("count tables round-trip through csv") {
    CountTable t;
    t.rows = {{10.0, 9}, {100.0, 169}, {1000.0, 3329}};
    std::ostringstream out;
    write_counts_csv(out, t);
    CHECK(out.str().rfind("T,N", 0) == 0);

    std::istringstream in(out.str());
    CountTable back = read_counts_csv(in);
    REQUIRE(back.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.rows[i].first == t.rows[i].first);
        CHECK(back.rows[i].second == t.rows[i].second);
    }

    std::istringstream bad("T,N\n10,x\n");
    CHECK_THROWS_AS(read_counts_csv(bad), IoError);
}

TEST_CASE("sieve reports write one row per cutoff") {
    SieveReport rep = almost_prime_census(Quadruple(-1, 2, 2, 3), {10, 100},
                                          {1, 2, 3, 4}, 6);
    std::ostringstream out;
    write_sieve_csv(out, rep);
    std::string text = out.str();
    CHECK(text.rfind("T,R,i,count,normalized", 0) == 0);
    CHECK(count_substr(text, "\n") == 3);  // header + two rows
}

TEST_CASE("fit reports serialize the table context") {
    CountTable t = count_table(Quadruple(-1, 2, 2, 3), {10, 40, 100, 400, 1000},
                               CountMode::Geometric);
    FitResult fit = fit_exponent(t, {10, 1000});
    std::string json = fit_report_json(fit, t);
    CHECK(json.find("\"alpha\":") != std::string::npos);
    CHECK(json.find("\"c\":") != std::string::npos);
    CHECK(json.find("\"residual\":") != std::string::npos);
    CHECK(json.find("\"window\":") != std::string::npos);
    CHECK(json.find("\"mode\": \"geometric\"") != std::string::npos);
    CHECK(json.find("\"norm\": \"max\"") != std::string::npos);
    CHECK(json.find("\"root\":") != std::string::npos);
    CHECK(json.find("-1") != std::string::npos);
    // no warnings key when nothing went wrong
    CHECK(json.find("\"warnings\"") == std::string::npos);

    FitResult warned = fit;
    warned.warnings.push_back("synthetic warning");
    CHECK(fit_report_json(warned, t).find("synthetic warning") !=
          std::string::npos);
}

TEST_CASE("svg output draws every member") {
    auto res = generate(make_packing_spec(Quadruple(-1, 2, 2, 3)), Rat(30));
    std::string svg = render_svg(res.circles, 640);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_substr(svg, "<circle") == res.circles.size());
    CHECK(svg.find("</svg>") != std::string::npos);

    auto strip = generate(make_packing_spec(Quadruple(0, 0, 1, 1)), Rat(20));
    std::string ssvg = render_svg(strip.circles, 640);
    CHECK(count_substr(ssvg, "<rect") == 2);
    CHECK(count_substr(ssvg, "<circle") == strip.circles.size() - 2);
}

TEST_CASE("json escaping") {
    CHECK(json_escape("plain") == "plain");
    CHECK(json_escape("a\"b") == "a\\\"b");
    CHECK(json_escape("a\\b") == "a\\\\b");
    CHECK(json_escape("a\nb") == "a\\nb");
    CHECK(json_escape(std::string{'a', '\x01', 'b'}) == "a\\u0001b");
}
