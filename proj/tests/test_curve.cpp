#include <random>

#include "crtc/curve.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace crtc;

namespace {
const Poly X({0.0, 1.0});
const Poly One({1.0});
}  // namespace

TEST_CASE("make_curve on (x, -x, 1)") {
    TrigonalCurve c = make_curve(X, -X, One);
    CHECK(c.n == 1);
    CHECK(c.cover_degree == 1);
    CHECK(c.p.coeff(0) == Complex(-1.0));
    CHECK(c.p.coeff(1) == Complex(1.0));
    CHECK(c.q.coeff(0) == Complex(-1.0));
    CHECK(c.q.coeff(1) == Complex(-1.0));
    CHECK(maximal_degree(c) == 1);
}

TEST_CASE("make_curve rejects degenerate and triple-intersection inputs") {
    Poly x2 = Poly::monomial(2);
    CHECK_THROWS_AS(make_curve(x2, x2, Poly({0.0})), DegenerateComponents);
    CHECK_THROWS_AS(make_curve(X, 2.0 * X, 3.0 * X), TripleIntersection);
    CHECK_THROWS_AS(make_curve(One, 2.0 * One, 3.0 * One), ZeroDegree);
}

TEST_CASE("maximal degree of the reference examples") {
    Poly x4 = Poly::monomial(4);
    Poly y2 = Poly({-1.0, 0.0, 1.0});        // x^2 - 1
    Poly y3 = Poly({-16.0, 0.0, 8.0});       // 8x^2 - 16
    CHECK(maximal_degree(make_curve(x4, y2, y3)) == 4);
    CHECK(maximal_degree(make_curve(Poly::monomial(3), -Poly::monomial(2), One)) == 3);
    CHECK(maximal_degree(make_curve(X, -X, One)) == 1);
}

TEST_CASE("singular fibers of (x, -x, 1)") {
    TrigonalCurve c = make_curve(X, -X, One);
    SingularFibers f = singular_fibers(c);
    REQUIRE(f.s12.roots.size() == 1);
    CHECK(testutil::close(f.s12.roots[0].value, 0.0, 1e-12));
    REQUIRE(f.s13.roots.size() == 1);
    CHECK(testutil::close(f.s13.roots[0].value, 1.0, 1e-12));
    REQUIRE(f.s23.roots.size() == 1);
    CHECK(testutil::close(f.s23.roots[0].value, -1.0, 1e-12));
    CHECK(f.s12.degree_deficit == 0);
    CHECK(f.s23.degree_deficit == 0);
    CHECK(f.s13.degree_deficit == 0);
}

TEST_CASE("singular fibers of (x^3, -x^2, 1)") {
    TrigonalCurve c = make_curve(Poly::monomial(3), -Poly::monomial(2), One);
    SingularFibers f = singular_fibers(c);
    // s12: roots of x^3 + x^2 = x^2 (x+1)
    REQUIRE(f.s12.roots.size() == 2);
    CHECK(testutil::close(f.s12.roots[0].value, -1.0, 1e-9));
    CHECK(f.s12.roots[0].multiplicity == 1);
    CHECK(testutil::close(f.s12.roots[1].value, 0.0, 1e-7));
    CHECK(f.s12.roots[1].multiplicity == 2);
}

TEST_CASE("fiber at infinity flagged when the difference drops degree") {
    TrigonalCurve c = make_curve(Poly::monomial(2), Poly({1.0, 0.0, 1.0}), Poly({0.0}));
    SingularFibers f = singular_fibers(c);
    CHECK(f.s12.roots.empty());
    CHECK(f.s12.degree_deficit == 2);
}

TEST_CASE("property: fiber counts are bounded by 3n") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 4;
        TrigonalCurve c = testutil::random_curve(rng, n);
        SingularFibers f = singular_fibers(c);
        int total = f.s12.total_multiplicity() + f.s23.total_multiplicity() +
                    f.s13.total_multiplicity();
        CHECK(total == 3 * c.cover_degree);
        CHECK(total <= 3 * c.n);
        CHECK((f.s12.finite_multiplicity() > 0 || f.s12.degree_deficit > 0));
        CHECK((f.s23.finite_multiplicity() > 0 || f.s23.degree_deficit > 0));
        CHECK((f.s13.finite_multiplicity() > 0 || f.s13.degree_deficit > 0));
    }
}

TEST_CASE("property: rejection matches common_roots") {
    std::mt19937 rng(2024);
    int rejected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Poly y1 = testutil::random_poly(rng, 2);
        Poly y2 = testutil::random_poly(rng, 2);
        Poly y3 = testutil::random_poly(rng, 1);
        Poly p = y1 - y3, q = y2 - y3;
        bool expect_reject = false;
        if (!p.is_zero() && !q.is_zero() && p.degree() > 0 && q.degree() > 0)
            expect_reject = !common_roots(p, q).empty();
        try {
            make_curve(y1, y2, y3);
            CHECK(!expect_reject);
        } catch (const TripleIntersection&) {
            CHECK(expect_reject);
            ++rejected;
        } catch (const Error&) {
            // degenerate inputs are fine to reject for other reasons
        }
    }
    (void)rejected;
}
