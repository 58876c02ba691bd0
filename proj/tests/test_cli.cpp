#include "crtc/report.hpp"
#include "crtc/svg.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace crtc;

namespace {
size_t count_occurrences(const std::string& hay, const std::string& needle) {
    size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}
}  // namespace

TEST_CASE("parse_spec on the direct encoding") {
    CurveSpec spec = parse_spec(R"({"y1":[[0,0],[1,0]],"y2":[[0,0],[-1,0]],"y3":[[1,0]]})");
    REQUIRE(spec.has_curve);
    TrigonalCurve c = make_curve(spec.ys[0], spec.ys[1], spec.ys[2]);
    CHECK(c.n == 1);
    CHECK(c.p.coeff(1) == Complex(1.0));
}

TEST_CASE("parse_spec reports the failing path") {
    try {
        parse_spec(R"({"y1":[[0,0],[1,0]],"y2":[[0,0],[-1,0]]})");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("y3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_spec("not json"), ParseError);
    try {
        parse_spec(R"({"y1":[[0,0],[1]],"y2":[[0,0]],"y3":[[1,0]]})");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("y1[1]") != std::string::npos);
    }
}

TEST_CASE("parse_spec with a family block") {
    CurveSpec spec = parse_spec(R"({"family":{
        "param":"a",
        "y1":[[[0,0],[1,0]],[[0,0]],[[1,0]]],
        "y2":[[[1,0]],[[2,0]]],
        "y3":[[[1,0]],[[-1,0]]],
        "grid":{"range":[-1,3],"count":200}}})");
    REQUIRE(spec.has_family);
    CHECK(spec.family.param == "a");
    CHECK(spec.family.samples.size() == 200);
    CHECK(spec.grid_is_line);
    TrigonalCurve c = spec.family.at(Complex(2.0, 0.0));
    CHECK(c.y1.coeff(0) == Complex(2.0));
    CHECK(c.y1.coeff(2) == Complex(1.0));
}

TEST_CASE("dessin report round-trips its counts") {
    TrigonalCurve c = make_curve(Poly({0.0, 1.0}), Poly({0.0, -1.0}), Poly({1.0}));
    Dessin d = build_dessin(c, 64);
    Json rep = dessin_report(d);
    std::string text = rep.dump();
    Json back = Json::parse(text);
    CHECK(back["vertices"].size() == d.vertices.size());
    CHECK(back["edges"].size() == d.edges.size());
    CHECK(back["regions"].size() == d.regions.size());
    CHECK(back["edge_count"].get<int>() == 6);
    CHECK(back["combinatorial_type"].get<std::vector<int>>() == std::vector<int>({2, 2, 2}));
    CHECK(back["is_simple"].get<bool>());
    CHECK(back["maximal"]["value"].get<bool>());
    CHECK(back["structural_report"]["pass"].get<bool>());
}

TEST_CASE("enumerate reports") {
    Json bound = enumerate_report(3, "bound");
    CHECK(bound["formula"].get<int>() == 8);
    CHECK(bound["oracle"].get<int>() == 8);
    CHECK(bound["agree"].get<bool>());

    Json bound4 = enumerate_report(4, "bound");
    CHECK_FALSE(bound4["agree"].get<bool>());

    Json pre = enumerate_report(4, "pretypes");
    CHECK(pre["count"].get<int>() == 23);
    int nonreal = 0;
    for (const auto& row : pre["types"])
        if (row["realizable"].get<std::string>() == "no") ++nonreal;
    CHECK(nonreal == 1);

    Json sc = enumerate_report(5, "simple-count");
    CHECK(sc["count"].get<std::int64_t>() == 31);

    CHECK_THROWS_AS(enumerate_report(3, "nope"), ValidationError);
}

TEST_CASE("deform report on a short real sweep") {
    CurveSpec spec = parse_spec(R"({"family":{
        "param":"a",
        "y1":[[[0,0],[1,0]],[[0,0]],[[1,0]]],
        "y2":[[[1,0]],[[2,0]]],
        "y3":[[[1,0]],[[-1,0]]],
        "grid":{"range":[4.5,5.5],"count":12}}})");
    Json rep = deform_report(spec, 48, 0.02);
    CHECK(rep["samples"].size() == 12);
    REQUIRE(rep["events"].size() >= 1);
    CHECK(rep["events"][0]["kind"].get<std::string>() == "merge_white");
}

TEST_CASE("svg rendering is deterministic with the right marker counts") {
    TrigonalCurve c = make_curve(Poly({0.0, 1.0}), Poly({0.0, -1.0}), Poly({1.0}));
    Dessin d = build_dessin(c, 64);
    std::string svg1 = render_svg(d);
    std::string svg2 = render_svg(d);
    CHECK(svg1 == svg2);
    CHECK(count_occurrences(svg1, "black-vertex") == 2);
    CHECK(count_occurrences(svg1, "white-vertex") == 3);
    CHECK(count_occurrences(svg1, "cross-vertex") == 3);
    CHECK(count_occurrences(svg1, "polyline") == 6);

    RenderStyle sup;
    sup.suppress_bivalent = true;
    std::string svg3 = render_svg(d, sup);
    CHECK(count_occurrences(svg3, "white-vertex") == 0);
}

TEST_CASE("empty locus renders axes only") {
    std::string svg = render_locus_svg({});
    CHECK(count_occurrences(svg, "axis") == 2);
    CHECK(count_occurrences(svg, "locus-point") == 0);
}
