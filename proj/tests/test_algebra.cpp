#include <cmath>
#include <random>

#include "crtc/algebra.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace crtc;

TEST_CASE("normalize strips high-order near-zeros") {
    Poly p({1.0, 0.0, 0.0});
    CHECK(p.degree() == 0);
    CHECK(p.coeff(0) == Complex(1.0));

    Poly z({0.0, 0.0});
    CHECK(z.degree() == -1);
    CHECK(z.is_zero());

    Poly q({2.0, 3.0});
    CHECK(q.degree() == 1);
    CHECK(q.coeff(0) == Complex(2.0));
    CHECK(q.coeff(1) == Complex(3.0));
}

TEST_CASE("arith on small polynomials") {
    Poly a({-1.0, 1.0});   // x - 1
    Poly b({-1.0, -1.0});  // -x - 1

    Poly sum = arith(a, b, ArithOp::add);
    CHECK(sum.degree() == 0);
    CHECK(sum.coeff(0) == Complex(-2.0));

    Poly prod = arith(a, b, ArithOp::mul);  // 1 - x^2
    CHECK(prod.degree() == 2);
    CHECK(testutil::close(prod.coeff(0), 1.0, 1e-15));
    CHECK(testutil::close(prod.coeff(1), 0.0, 1e-15));
    CHECK(testutil::close(prod.coeff(2), -1.0, 1e-15));

    CHECK(arith(a, a, ArithOp::sub).is_zero());
}

TEST_CASE("derivative") {
    Poly p({1.5, 1.0, 1.0});  // x^2 + x + 1.5
    Poly dp = p.derivative();
    CHECK(dp.degree() == 1);
    CHECK(dp.coeff(0) == Complex(1.0));
    CHECK(dp.coeff(1) == Complex(2.0));

    CHECK(Poly({7.0}).derivative().is_zero());

    Poly cube = Poly::monomial(3);
    Poly dc = cube.derivative();
    CHECK(dc.degree() == 2);
    CHECK(dc.coeff(2) == Complex(3.0));
}

TEST_CASE("all_roots on the cross-ratio polynomial") {
    // lambda^2 - lambda + 1: roots e^{+-i pi/3}
    Poly p({1.0, -1.0, 1.0});
    RootSet rs = all_roots(p);
    REQUIRE(rs.roots.size() == 2);
    CHECK(testutil::has_root(rs, std::polar(1.0, -std::acos(-1.0) / 3.0), 1e-10));
    CHECK(testutil::has_root(rs, std::polar(1.0, std::acos(-1.0) / 3.0), 1e-10));
}

TEST_CASE("all_roots recovers multiplicities") {
    // (x-2)^2 (x+1)
    Poly p = Poly({-2.0, 1.0}) * Poly({-2.0, 1.0}) * Poly({1.0, 1.0});
    RootSet rs = all_roots(p);
    REQUIRE(rs.roots.size() == 2);
    CHECK(testutil::has_root(rs, -1.0, 1e-9, 1));
    CHECK(testutil::has_root(rs, 2.0, 1e-7, 2));
    CHECK(rs.degree_deficit == 0);
}

TEST_CASE("all_roots of 3x^2+1") {
    Poly p({1.0, 0.0, 3.0});
    RootSet rs = all_roots(p);
    REQUIRE(rs.roots.size() == 2);
    double m = 1.0 / std::sqrt(3.0);
    CHECK(testutil::has_root(rs, Complex(0.0, -m), 1e-10));
    CHECK(testutil::has_root(rs, Complex(0.0, m), 1e-10));
}

TEST_CASE("common_roots") {
    Poly p({-1.0, 1.0});                           // x - 1
    Poly q = Poly({-1.0, 1.0}) * Poly({2.0, 1.0});  // (x-1)(x+2)
    auto cr = common_roots(p, q);
    REQUIRE(cr.size() == 1);
    CHECK(testutil::close(cr[0], 1.0, 1e-9));

    CHECK(common_roots(Poly({0.0, 0.0, 1.0}), Poly({1.0, 1.0})).empty());

    auto ci = common_roots(Poly({1.0, 0.0, 1.0}), Poly({Complex(0.0, -1.0), 1.0}));
    REQUIRE(ci.size() == 1);
    CHECK(testutil::close(ci[0], Complex(0.0, 1.0), 1e-9));
}

TEST_CASE("rational derivative numerator") {
    // (x^2 + x + a - 1) / (3x) with a = 2.5: critical points +-sqrt(1.5)
    double a = 2.5;
    RationalMap f{Poly({a - 1.0, 1.0, 1.0}), Poly({0.0, 3.0})};
    Poly num = rational_derivative_numerator(f);
    RootSet rs = all_roots(num);
    REQUIRE(rs.roots.size() == 2);
    double s = std::sqrt(a - 1.0);
    CHECK(testutil::has_root(rs, -s, 1e-9));
    CHECK(testutil::has_root(rs, s, 1e-9));

    RationalMap id{Poly({0.0, 1.0}), Poly({1.0})};
    CHECK(rational_derivative_numerator(id).degree() == 0);

    RationalMap sq{Poly({0.0, 0.0, 1.0}), Poly({1.0})};
    Poly d2 = rational_derivative_numerator(sq);
    RootSet rs2 = all_roots(d2);
    REQUIRE(rs2.roots.size() == 1);
    CHECK(testutil::close(rs2.roots[0].value, 0.0, 1e-12));
}

TEST_CASE("property: roots reconstruct random polynomials") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> deg(1, 12);
    for (int trial = 0; trial < 60; ++trial) {
        Poly p = testutil::random_poly(rng, deg(rng));
        RootSet rs = all_roots(p);
        CHECK(rs.finite_multiplicity() == p.degree());
        Poly rec = poly_from_roots(rs, p.leading());
        double scale = p.max_abs_coeff();
        for (int k = 0; k <= p.degree(); ++k)
            CHECK(std::abs(rec.coeff(k) - p.coeff(k)) <= 1e-6 * scale);
    }
}

TEST_CASE("property: derivative numerator matches finite differences") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> deg(1, 5);
    for (int trial = 0; trial < 10; ++trial) {
        Poly num = testutil::random_poly(rng, deg(rng));
        Poly den = testutil::random_poly(rng, deg(rng));
        if (den.is_zero()) continue;
        RationalMap f{num, den};
        Poly dnum = rational_derivative_numerator(f);
        int checked = 0;
        while (checked < 20) {
            Complex x = 3.0 * testutil::rand_unit_box(rng);
            Complex dv = den(x);
            if (std::abs(dv) < 0.15) continue;
            ++checked;
            double h = 1e-6 * (1.0 + std::abs(x));
            Complex fp = num(x + h) / den(x + h);
            Complex fm = num(x - h) / den(x - h);
            Complex fd = (fp - fm) / (2.0 * h);
            Complex an = dnum(x) / (dv * dv);
            CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("property: common_roots(p, p) returns every distinct root") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        Poly p = testutil::random_poly(rng, 6);
        RootSet rs = all_roots(p);
        auto cr = common_roots(p, p);
        CHECK(cr.size() == rs.roots.size());
    }
}

TEST_CASE("all_roots rejects the zero polynomial") {
    CHECK_THROWS_AS(all_roots(Poly()), ValidationError);
}
