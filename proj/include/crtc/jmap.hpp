#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "crtc/algebra.hpp"
#include "crtc/curve.hpp"
#include "crtc/errors.hpp"

namespace crtc {

// Vertex color codes.  Black vertices sit over lambda = e^{+-i pi/3}, white
// vertices over lambda in {-1, 1/2, 2}, crosses over lambda in {1, inf, 0}.
enum class BlackColor : int { cyan = 0, yellow = 1 };
enum class WhiteColor : int { red = 0, blue = 1, green = 2 };
enum class CrossPair : int { s12 = 0, s23 = 1, s13 = 2 };  // lambda = 1, inf, 0

inline const char* to_string(BlackColor c) { return c == BlackColor::cyan ? "cyan" : "yellow"; }
inline const char* to_string(WhiteColor c) {
    switch (c) {
        case WhiteColor::red: return "red";
        case WhiteColor::blue: return "blue";
        default: return "green";
    }
}
inline const char* to_string(CrossPair c) {
    switch (c) {
        case CrossPair::s12: return "12";
        case CrossPair::s23: return "23";
        default: return "13";
    }
}

inline Complex lambda_of(BlackColor c) {
    const double s = (c == BlackColor::cyan) ? 1.0 : -1.0;
    return Complex(0.5, s * std::sqrt(3.0) / 2.0);
}
inline Complex lambda_of(WhiteColor c) {
    switch (c) {
        case WhiteColor::red: return Complex(-1.0, 0.0);
        case WhiteColor::blue: return Complex(0.5, 0.0);
        default: return Complex(2.0, 0.0);
    }
}

// j value with an explicit pole marker; downstream region logic needs the
// symbolic signal, not an overflowed float.
struct JValue {
    bool pole = false;
    Complex value{0.0, 0.0};
};

inline Complex j_of_lambda(Complex lam) {
    Complex b = lam * lam - lam + 1.0;
    Complex d = lam * (lam - 1.0);
    return 4.0 * b * b * b / (27.0 * d * d);
}

inline constexpr double kPoleTol = 1e-10;
inline constexpr double kRealJTol = 1e-8;  // realness / (0,1)-interior tolerance

// Evaluates lambda = p(x)/q(x) and then the fixed degree-6 map.  Reports a
// pole when lambda falls on {0, 1, inf} within tolerance.
inline JValue j_eval(const TrigonalCurve& c, Complex x) {
    const double ax = std::abs(x);
    Complex pv = c.p(x);
    Complex qv = c.q(x);
    Complex dv = pv - qv;
    if (std::abs(pv) <= kPoleTol * (c.p.eval_scale(ax) + 1e-300)) return {true, {}};
    if (std::abs(qv) <= kPoleTol * (c.q.eval_scale(ax) + 1e-300)) return {true, {}};
    if (std::abs(dv) <= kPoleTol * ((c.p - c.q).eval_scale(ax) + 1e-300)) return {true, {}};
    Complex b = pv * pv - pv * qv + qv * qv;
    Complex den = pv * qv * dv;
    Complex j = 4.0 * b * b * b / (27.0 * den * den);
    if (!is_finite(j)) return {true, {}};
    return {false, j};
}

// lambda at x = infinity: the ratio of leading coefficients (or 0 / inf when
// the degrees differ).
inline JValue j_at_infinity(const TrigonalCurve& c) {
    if (c.p.degree() != c.q.degree()) return {true, {}};  // lambda(inf) in {0, inf}
    Complex ratio = c.p.leading() / c.q.leading();
    if (std::abs(ratio) <= kPoleTol || std::abs(ratio - 1.0) <= kPoleTol) return {true, {}};
    Complex j = j_of_lambda(ratio);
    if (!is_finite(j)) return {true, {}};
    return {false, j};
}

// The level-set polynomial 4 (p^2 - pq + q^2)^3 - 27 r (pq(p-q))^2 of degree
// at most 6 * cover_degree.
inline Poly level_set_poly(const TrigonalCurve& c, double r) {
    Poly b = c.p * c.p - c.p * c.q + c.q * c.q;
    Poly a = c.p * c.q * (c.p - c.q);
    return Complex(4.0) * (b * b * b) - Complex(27.0 * r) * (a * a);
}

inline RootSet level_set(const TrigonalCurve& c, double r, const SolveOptions& opt = {}) {
    Poly l = level_set_poly(c, r);
    if (l.is_zero())
        throw ValidationError("level_set: level polynomial vanished identically");
    RootSet rs;
    if (l.degree() >= 1) rs = all_roots(l, opt);
    rs.degree_deficit = 6 * c.cover_degree - std::max(l.degree(), 0);
    return rs;
}

// ---------------------------------------------------------------------------
// Critical points

struct CriticalPoint {
    Complex x{0.0, 0.0};
    bool at_infinity = false;
    int multiplicity = 1;        // as a zero of the cross-ratio derivative
    JValue j;
    bool from_cross_ratio = true;  // false: forced ramification at a vertex
};

// Critical points of j_C.  The cross-ratio contributes the zeros of
// p'q - pq' (plus possibly the point at infinity); every black, white and
// cross vertex is a critical point of the composed map as well and is listed
// with from_cross_ratio = false.
inline std::vector<CriticalPoint> critical_points(const TrigonalCurve& c,
                                                  const SolveOptions& opt = {}) {
    std::vector<CriticalPoint> out;
    Poly num = rational_derivative_numerator(RationalMap{c.p, c.q});
    if (num.degree() >= 1) {
        RootSet rs = all_roots(num, opt);
        for (const RootEntry& r : rs.roots)
            out.push_back({r.value, false, r.multiplicity, j_eval(c, r.value), true});
    }
    int expected = 2 * c.cover_degree - 2;
    int deficit = expected - std::max(num.degree(), 0);
    if (deficit > 0)
        out.push_back({{}, true, deficit, j_at_infinity(c), true});

    auto add_class = [&](const Poly& poly, const JValue& jv) {
        if (poly.degree() >= 1)
            for (const RootEntry& r : all_roots(poly, opt).roots)
                out.push_back({r.value, false, r.multiplicity, jv, false});
        if (c.cover_degree - std::max(poly.degree(), 0) > 0)
            out.push_back({{}, true, c.cover_degree - std::max(poly.degree(), 0), jv, false});
    };
    add_class(c.p - lambda_of(BlackColor::cyan) * c.q, {false, 0.0});
    add_class(c.p - lambda_of(BlackColor::yellow) * c.q, {false, 0.0});
    add_class(c.p + c.q, {false, 1.0});
    add_class(Complex(2.0) * c.p - c.q, {false, 1.0});
    add_class(c.p - Complex(2.0) * c.q, {false, 1.0});
    add_class(c.p - c.q, {true, {}});
    add_class(c.q, {true, {}});
    add_class(c.p, {true, {}});
    return out;
}

inline bool j_real_in_unit_interval_strict(const JValue& j) {
    if (j.pole) return false;
    if (std::abs(j.value.imag()) > kRealJTol * (1.0 + std::abs(j.value))) return false;
    double re = j.value.real();
    return re > kRealJTol && re < 1.0 - kRealJTol;
}

inline bool j_real_in_unit_interval_closed(const JValue& j, double slack = kRealJTol) {
    if (j.pole) return false;
    if (std::abs(j.value.imag()) > slack * (1.0 + std::abs(j.value))) return false;
    double re = j.value.real();
    return re >= -slack && re <= 1.0 + slack;
}

// ---------------------------------------------------------------------------
// Special points

struct SpecialPoints {
    RootSet black[2];   // indexed by BlackColor
    RootSet white[3];   // indexed by WhiteColor
    SingularFibers crosses;
    std::vector<CriticalPoint> monochrome;      // cross-ratio critical, j real in (0,1)
    std::vector<CriticalPoint> cross_ratio_critical;  // every cross-ratio critical point
};

inline Poly black_poly(const TrigonalCurve& c, BlackColor col) {
    return c.p - lambda_of(col) * c.q;
}
inline Poly white_poly(const TrigonalCurve& c, WhiteColor col) {
    switch (col) {
        case WhiteColor::red: return c.p + c.q;
        case WhiteColor::blue: return Complex(2.0) * c.p - c.q;
        default: return c.p - Complex(2.0) * c.q;
    }
}
inline Poly cross_poly(const TrigonalCurve& c, CrossPair pair) {
    switch (pair) {
        case CrossPair::s12: return c.p - c.q;
        case CrossPair::s23: return c.q;
        default: return c.p;
    }
}

inline SpecialPoints special_points(const TrigonalCurve& c, const SolveOptions& opt = {}) {
    SpecialPoints sp;
    auto solve_class = [&](const Poly& poly) {
        RootSet rs;
        if (poly.degree() >= 1) rs = all_roots(poly, opt);
        rs.degree_deficit = c.cover_degree - std::max(poly.degree(), 0);
        return rs;
    };
    sp.black[0] = solve_class(black_poly(c, BlackColor::cyan));
    sp.black[1] = solve_class(black_poly(c, BlackColor::yellow));
    sp.white[0] = solve_class(white_poly(c, WhiteColor::red));
    sp.white[1] = solve_class(white_poly(c, WhiteColor::blue));
    sp.white[2] = solve_class(white_poly(c, WhiteColor::green));
    sp.crosses = singular_fibers(c, opt);

    for (const CriticalPoint& cp : critical_points(c, opt)) {
        if (!cp.from_cross_ratio) continue;
        sp.cross_ratio_critical.push_back(cp);
        if (j_real_in_unit_interval_strict(cp.j)) sp.monochrome.push_back(cp);
    }
    return sp;
}

// ---------------------------------------------------------------------------
// The cross-ratio graph: phi2^{-1}(R P^1) on the lambda sphere.
//
// Gamma arcs carry j in [0,1] (black -> white), positive arcs j in [1, inf]
// (cross -> white, along the real lambda axis), negative arcs j in [-inf, 0]
// (black -> cross).  j is strictly monotone along each open arc, so a target
// j value is inverted by bisection in the arc parameter.

struct Arc {
    enum class Kind { gamma, positive, negative };
    Kind kind = Kind::gamma;
    BlackColor black = BlackColor::cyan;   // valid for gamma / negative
    WhiteColor white = WhiteColor::red;    // valid for gamma / positive
    CrossPair cross = CrossPair::s12;      // valid for positive / negative

    Complex lambda(double t) const {
        const double pi = std::acos(-1.0);
        const double sq32 = std::sqrt(3.0) / 2.0;
        const double sign = (black == BlackColor::cyan) ? 1.0 : -1.0;
        switch (kind) {
            case Kind::gamma:
                switch (white) {
                    case WhiteColor::red: {
                        double th = sign * (pi / 3.0 + t * 2.0 * pi / 3.0);
                        return Complex(std::cos(th), std::sin(th));
                    }
                    case WhiteColor::blue:
                        return Complex(0.5, sign * sq32 * (1.0 - t));
                    default: {  // green
                        double ps = sign * (2.0 * pi / 3.0) * (1.0 - t);
                        return Complex(1.0 + std::cos(ps), std::sin(ps));
                    }
                }
            case Kind::positive:
                switch (white) {
                    case WhiteColor::red:
                        return (cross == CrossPair::s23) ? Complex(-1.0 / std::max(t, 1e-300), 0.0)
                                                         : Complex(-t, 0.0);
                    case WhiteColor::blue:
                        return (cross == CrossPair::s13) ? Complex(0.5 * t, 0.0)
                                                         : Complex(1.0 - 0.5 * t, 0.0);
                    default:  // green
                        return (cross == CrossPair::s12) ? Complex(1.0 + t, 0.0)
                                                         : Complex(2.0 / std::max(t, 1e-300), 0.0);
                }
            case Kind::negative:
            default:
                switch (cross) {
                    case CrossPair::s12: {
                        double th = sign * (pi / 3.0) * (1.0 - t);
                        return Complex(std::cos(th), std::sin(th));
                    }
                    case CrossPair::s23:
                        return Complex(0.5, sign * sq32 / std::max(1.0 - t, 1e-300));
                    default: {  // s13
                        double ps = sign * (2.0 * pi / 3.0 + t * pi / 3.0);
                        return Complex(1.0 + std::cos(ps), std::sin(ps));
                    }
                }
        }
    }

    // j along the arc, as a real number; poles become +-1e300 with the sign of
    // the arc's unbounded end.
    double jreal(double t) const {
        Complex j = j_of_lambda(lambda(t));
        if (!is_finite(j) || std::abs(j) > 1e290)
            return (kind == Kind::negative) ? -1e300 : 1e300;
        return j.real();
    }

    // j(t) runs 0 -> 1 on gamma arcs, +inf -> 1 on positive arcs and
    // 0 -> -inf on negative arcs.
    double t_for_j(double r) const {
        double lo = 1e-14, hi = 1.0 - 1e-14;
        bool increasing = (kind == Kind::gamma);
        for (int it = 0; it < 90; ++it) {
            double mid = 0.5 * (lo + hi);
            double jm = jreal(mid);
            bool go_right = increasing ? (jm < r) : (jm > r);
            if (go_right)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    Complex lambda_for_j(double r) const { return lambda(t_for_j(r)); }
};

inline const std::array<Arc, 6>& gamma_arcs() {
    static const std::array<Arc, 6> arcs = [] {
        std::array<Arc, 6> a{};
        int i = 0;
        for (int b = 0; b < 2; ++b)
            for (int w = 0; w < 3; ++w) {
                a[i].kind = Arc::Kind::gamma;
                a[i].black = static_cast<BlackColor>(b);
                a[i].white = static_cast<WhiteColor>(w);
                ++i;
            }
        return a;
    }();
    return arcs;
}

inline const std::array<Arc, 12>& extension_arcs() {
    static const std::array<Arc, 12> arcs = [] {
        std::array<Arc, 12> a{};
        int i = 0;
        // positive (real-axis) arcs: cross -> white
        const std::pair<CrossPair, WhiteColor> pos[6] = {
            {CrossPair::s23, WhiteColor::red},  {CrossPair::s13, WhiteColor::red},
            {CrossPair::s13, WhiteColor::blue}, {CrossPair::s12, WhiteColor::blue},
            {CrossPair::s12, WhiteColor::green}, {CrossPair::s23, WhiteColor::green}};
        for (auto [cp, wc] : pos) {
            a[i].kind = Arc::Kind::positive;
            a[i].cross = cp;
            a[i].white = wc;
            ++i;
        }
        // negative arcs: black -> cross
        for (int b = 0; b < 2; ++b)
            for (int cp = 0; cp < 3; ++cp) {
                a[i].kind = Arc::Kind::negative;
                a[i].black = static_cast<BlackColor>(b);
                a[i].cross = static_cast<CrossPair>(cp);
                ++i;
            }
        return a;
    }();
    return arcs;
}

// Locates the gamma arc holding a given lambda value with j real in (0,1).
// Returns the arc index in gamma_arcs() or -1.
inline int gamma_arc_of_lambda(Complex lam, double jr) {
    const auto& arcs = gamma_arcs();
    int best = -1;
    double bestd = 1e9;
    for (int i = 0; i < 6; ++i) {
        Complex cand = arcs[static_cast<size_t>(i)].lambda_for_j(jr);
        double d = std::abs(cand - lam);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    return bestd <= 1e-5 * (1.0 + std::abs(lam)) ? best : -1;
}

inline int extension_arc_of_lambda(Complex lam, double jr) {
    const auto& arcs = extension_arcs();
    int best = -1;
    double bestd = 1e9;
    for (int i = 0; i < 12; ++i) {
        const Arc& arc = arcs[static_cast<size_t>(i)];
        bool positive = arc.kind == Arc::Kind::positive;
        if (positive && jr <= 1.0) continue;
        if (!positive && jr >= 0.0) continue;
        Complex cand = arc.lambda_for_j(jr);
        double d = std::abs(cand - lam);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    return bestd <= 1e-5 * (1.0 + std::abs(lam)) ? best : -1;
}

}  // namespace crtc
