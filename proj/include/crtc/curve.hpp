#pragma once

#include <algorithm>
#include <utility>

#include "crtc/algebra.hpp"
#include "crtc/errors.hpp"

namespace crtc {

// Completely reducible trigonal curve (y - y1)(y - y2)(y - y3) = 0.
// p = y1 - y3 and q = y2 - y3 carry everything downstream: the cross-ratio is
// lambda = p/q and the singular fibers are the zeros of p - q, q and p.
struct TrigonalCurve {
    Poly y1, y2, y3;
    Poly p, q;
    int n = 0;             // maximal degree: max(deg y1, deg y2, deg y3)
    int cover_degree = 0;  // degree of the cross-ratio map: max(deg p, deg q)
};

inline TrigonalCurve make_curve(Poly y1, Poly y2, Poly y3) {
    TrigonalCurve c;
    c.y1 = std::move(y1);
    c.y2 = std::move(y2);
    c.y3 = std::move(y3);
    c.n = std::max({c.y1.degree(), c.y2.degree(), c.y3.degree()});
    if (c.n <= 0)
        throw ZeroDegree("make_curve: all components are constant");

    c.p = c.y1 - c.y3;
    c.q = c.y2 - c.y3;
    Poly pq = c.p - c.q;  // = y1 - y2
    if (c.p.is_zero() || c.q.is_zero() || pq.is_zero())
        throw DegenerateComponents("make_curve: two components are identical");

    c.cover_degree = std::max(c.p.degree(), c.q.degree());
    if (c.cover_degree < 1)
        throw DegenerateComponents(
            "make_curve: component differences are constant; the cross-ratio map is constant");

    if (c.p.degree() > 0 && c.q.degree() > 0 && !common_roots(c.p, c.q).empty())
        throw TripleIntersection(
            "make_curve: components meet in a triple point; the dessin is undefined there");
    return c;
}

inline int maximal_degree(const TrigonalCurve& c) { return c.n; }

// x-positions of the singular fibers, split by which pair of components meets.
// degree_deficit flags a fiber of that pair at the point at infinity.
struct SingularFibers {
    RootSet s12;  // y1 = y2: zeros of p - q
    RootSet s23;  // y2 = y3: zeros of q
    RootSet s13;  // y1 = y3: zeros of p
};

inline SingularFibers singular_fibers(const TrigonalCurve& c, const SolveOptions& opt = {}) {
    SingularFibers f;
    auto solve_class = [&](const Poly& poly) {
        RootSet rs;
        if (poly.degree() >= 1) rs = all_roots(poly, opt);
        rs.degree_deficit = c.cover_degree - std::max(poly.degree(), 0);
        return rs;
    };
    f.s12 = solve_class(c.p - c.q);
    f.s23 = solve_class(c.q);
    f.s13 = solve_class(c.p);
    return f;
}

}  // namespace crtc
