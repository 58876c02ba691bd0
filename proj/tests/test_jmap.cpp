#include <cmath>
#include <random>

#include "crtc/jmap.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace crtc;

namespace {
const Poly X({0.0, 1.0});
const Poly One({1.0});

TrigonalCurve theta() { return make_curve(X, -X, One); }
}  // namespace

TEST_CASE("j_eval on (x, -x, 1)") {
    TrigonalCurve c = theta();

    // lambda = 2 at x = -1/3, so j = 1
    JValue j1 = j_eval(c, Complex(-1.0 / 3.0, 0.0));
    REQUIRE(!j1.pole);
    CHECK(std::abs(j1.value - Complex(1.0)) <= 1e-9);

    // lambda = 1 at x = 0: pole
    CHECK(j_eval(c, Complex(0.0, 0.0)).pole);

    // black vertex: j = 0
    JValue j0 = j_eval(c, Complex(0.0, 1.0 / std::sqrt(3.0)));
    REQUIRE(!j0.pole);
    CHECK(std::abs(j0.value) <= 1e-9);
}

TEST_CASE("level_set at r = 0 is the tripled black set") {
    TrigonalCurve c = theta();
    RootSet rs = level_set(c, 0.0);
    REQUIRE(rs.roots.size() == 2);
    double m = 1.0 / std::sqrt(3.0);
    CHECK(testutil::has_root(rs, Complex(0.0, -m), 1e-5, 3));
    CHECK(testutil::has_root(rs, Complex(0.0, m), 1e-5, 3));
    CHECK(rs.degree_deficit == 0);
}

TEST_CASE("level_set at r = 1 is the doubled white set") {
    TrigonalCurve c = theta();
    RootSet rs = level_set(c, 1.0);
    REQUIRE(rs.roots.size() == 2);
    CHECK(testutil::has_root(rs, Complex(-1.0 / 3.0, 0.0), 1e-6, 2));
    CHECK(testutil::has_root(rs, Complex(1.0 / 3.0, 0.0), 1e-6, 2));
    CHECK(rs.degree_deficit == 2);  // the white at infinity, doubled
}

TEST_CASE("special points of (x, -x, 1)") {
    TrigonalCurve c = theta();
    SpecialPoints sp = special_points(c);

    REQUIRE(sp.white[static_cast<int>(WhiteColor::blue)].roots.size() == 1);
    CHECK(testutil::close(sp.white[1].roots[0].value, Complex(1.0 / 3.0, 0.0), 1e-10));
    REQUIRE(sp.white[static_cast<int>(WhiteColor::green)].roots.size() == 1);
    CHECK(testutil::close(sp.white[2].roots[0].value, Complex(-1.0 / 3.0, 0.0), 1e-10));
    CHECK(sp.white[static_cast<int>(WhiteColor::red)].roots.empty());
    CHECK(sp.white[0].degree_deficit == 1);

    double m = 1.0 / std::sqrt(3.0);
    REQUIRE(sp.black[0].roots.size() == 1);
    REQUIRE(sp.black[1].roots.size() == 1);
    CHECK(testutil::close(sp.black[0].roots[0].value, Complex(0.0, -m), 1e-10));
    CHECK(testutil::close(sp.black[1].roots[0].value, Complex(0.0, m), 1e-10));

    // lambda at the cyan root is e^{+i pi/3}
    Complex lam = c.p(sp.black[0].roots[0].value) / c.q(sp.black[0].roots[0].value);
    CHECK(testutil::close(lam, lambda_of(BlackColor::cyan), 1e-9));

    CHECK(sp.monochrome.empty());

    int five_classes = 0;
    for (int b = 0; b < 2; ++b) five_classes += sp.black[b].total_multiplicity();
    for (int w = 0; w < 3; ++w) five_classes += sp.white[w].total_multiplicity();
    CHECK(five_classes == 5 * c.cover_degree);
}

TEST_CASE("critical points of (x, -x, 1)") {
    TrigonalCurve c = theta();
    auto cps = critical_points(c);
    int from_lambda = 0, black_zero = 0;
    for (const auto& cp : cps) {
        if (cp.from_cross_ratio) ++from_lambda;
        if (!cp.from_cross_ratio && !cp.j.pole && std::abs(cp.j.value) < 1e-12 &&
            !cp.at_infinity)
            ++black_zero;
    }
    CHECK(from_lambda == 0);  // the cross-ratio is a Moebius map here
    CHECK(black_zero == 2);   // both black vertices appear with j = 0
}

TEST_CASE("family critical points match the closed form") {
    // (x^2 + a, 2x + 1, -x + 1): cross-ratio (x^2 + x + a - 1)/(3x),
    // critical points +-sqrt(a - 1)
    for (double a : {2.5, 5.0, -0.75}) {
        TrigonalCurve c = make_curve(Poly({a, 0.0, 1.0}), Poly({1.0, 2.0}), Poly({1.0, -1.0}));
        Complex s = std::sqrt(Complex(a - 1.0, 0.0));
        int found = 0;
        for (const auto& cp : critical_points(c)) {
            if (!cp.from_cross_ratio || cp.at_infinity) continue;
            CHECK((testutil::close(cp.x, s, 1e-8) || testutil::close(cp.x, -s, 1e-8)));
            ++found;
        }
        CHECK(found == 2);
    }
}

TEST_CASE("property: j_eval agrees with the polynomial route") {
    std::mt19937 rng(31337);
    int checked = 0;
    while (checked < 20) {
        TrigonalCurve c = testutil::random_curve(rng, 1 + checked % 3);
        Poly b = c.p * c.p - c.p * c.q + c.q * c.q;
        Poly a2 = c.p * c.q * (c.p - c.q);
        Complex x = 2.0 * testutil::rand_unit_box(rng);
        JValue j = j_eval(c, x);
        if (j.pole) continue;
        Complex bv = b(x), av = a2(x);
        Complex j2 = 4.0 * bv * bv * bv / (27.0 * av * av);
        CHECK(std::abs(j.value - j2) <= 1e-9 * (1.0 + std::abs(j.value)));
        ++checked;
    }
}

TEST_CASE("property: five vertex classes total 5n") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + trial % 4;
        TrigonalCurve c = testutil::random_curve(rng, n);
        SpecialPoints sp = special_points(c);
        int total = 0;
        for (int b = 0; b < 2; ++b) total += sp.black[b].total_multiplicity();
        for (int w = 0; w < 3; ++w) total += sp.white[w].total_multiplicity();
        CHECK(total == 5 * c.cover_degree);
    }
}

TEST_CASE("property: level sets at 0 and 1 match the vertex classes") {
    std::mt19937 rng(808);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 1 + trial % 3;
        TrigonalCurve c = testutil::random_curve(rng, n);
        SpecialPoints sp = special_points(c);

        RootSet l0 = level_set(c, 0.0);
        int expect0 = 0;
        for (int b = 0; b < 2; ++b) expect0 += sp.black[b].finite_multiplicity();
        CHECK(l0.finite_multiplicity() == 3 * expect0);
        for (int b = 0; b < 2; ++b)
            for (const RootEntry& r : sp.black[b].roots) {
                bool found = false;
                for (const RootEntry& l : l0.roots)
                    if (std::abs(l.value - r.value) <= 1e-4 * (1.0 + std::abs(r.value)) &&
                        l.multiplicity == 3 * r.multiplicity)
                        found = true;
                CHECK(found);
            }

        RootSet l1 = level_set(c, 1.0);
        int expect1 = 0;
        for (int w = 0; w < 3; ++w) expect1 += sp.white[w].finite_multiplicity();
        CHECK(l1.finite_multiplicity() == 2 * expect1);
    }
}

TEST_CASE("monochrome points satisfy the level equation") {
    // Monochrome vertices sit on codimension-1 walls, so generic curves have
    // none; (x^2 + l, 1, 0) puts the cross-ratio critical value exactly at l.
    int seen = 0;
    for (Complex lstar : {Complex(0.5, 0.4), std::polar(1.0, 2.0),
                          Complex(1.0, 0.0) + std::polar(1.0, 0.9)}) {
        TrigonalCurve c = make_curve(Poly({lstar, 0.0, 1.0}), One, Poly());
        SpecialPoints sp = special_points(c);
        REQUIRE(sp.monochrome.size() == 1);
        const CriticalPoint& cp = sp.monochrome.front();
        CHECK(testutil::close(cp.x, 0.0, 1e-9));
        ++seen;
        // Residual against the pre-cancellation scale of the two level terms.
        Poly b = c.p * c.p - c.p * c.q + c.q * c.q;
        Poly a2 = c.p * c.q * (c.p - c.q);
        Complex bv = b(cp.x), av = a2(cp.x);
        double r = cp.j.value.real();
        double scale = 4.0 * std::abs(bv * bv * bv) + 27.0 * r * std::abs(av * av) + 1e-30;
        Poly lp = level_set_poly(c, r);
        CHECK(std::abs(lp(cp.x)) <= 1e-6 * scale);
    }
    CHECK(seen == 3);
}

TEST_CASE("arc parametrizations: j is monotone and invertible") {
    auto check_arc = [](const Arc& arc, bool increasing) {
        double prev = arc.jreal(1e-6);
        for (int k = 1; k <= 40; ++k) {
            double t = static_cast<double>(k) / 41.0;
            double cur = arc.jreal(t);
            if (increasing)
                CHECK(cur >= prev - 1e-12);
            else
                CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    };
    for (const Arc& arc : gamma_arcs()) {
        check_arc(arc, true);
        for (double r : {0.1, 0.5, 0.9}) {
            Complex lam = arc.lambda_for_j(r);
            CHECK(std::abs(j_of_lambda(lam) - Complex(r)) <= 1e-10);
        }
    }
    for (const Arc& arc : extension_arcs()) {
        check_arc(arc, false);
        for (double r : {1.5, 4.0, 50.0}) {
            if (arc.kind != Arc::Kind::positive) break;
            Complex lam = arc.lambda_for_j(r);
            CHECK(std::abs(j_of_lambda(lam) - Complex(r)) <= 1e-8 * (1.0 + r));
        }
        for (double r : {-0.5, -3.0, -40.0}) {
            if (arc.kind != Arc::Kind::negative) break;
            Complex lam = arc.lambda_for_j(r);
            CHECK(std::abs(j_of_lambda(lam) - Complex(r)) <= 1e-8 * (1.0 - r));
        }
    }
}

TEST_CASE("gamma_arc_of_lambda identifies the owning arc") {
    for (int i = 0; i < 6; ++i) {
        const Arc& arc = gamma_arcs()[i];
        for (double r : {0.2, 0.7}) {
            Complex lam = arc.lambda_for_j(r);
            CHECK(gamma_arc_of_lambda(lam, r) == i);
        }
    }
}
