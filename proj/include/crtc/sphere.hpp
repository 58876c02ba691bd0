#pragma once

#include <cmath>
#include <complex>

#include "crtc/algebra.hpp"

namespace crtc {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0 ? Vec3{x / n, y / n, z / n} : Vec3{0, 0, 1};
    }
};

// Stereographic embedding of C u {inf}: the origin maps to the south pole,
// infinity to the north pole (0,0,1).
inline Vec3 sphere_from_complex(Complex w) {
    double a = std::abs(w);
    if (!std::isfinite(a) || a > 1e150) return {0.0, 0.0, 1.0};
    double d = 1.0 + a * a;
    return {2.0 * w.real() / d, 2.0 * w.imag() / d, (a * a - 1.0) / d};
}

inline Vec3 sphere_north() { return {0.0, 0.0, 1.0}; }

inline Complex complex_from_sphere(const Vec3& p) {
    double d = 1.0 - p.z;
    if (d < 1e-14) return Complex(1e200, 0.0);
    return Complex(p.x / d, p.y / d);
}

inline double chordal(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

inline double chordal_cc(Complex a, Complex b) {
    return chordal(sphere_from_complex(a), sphere_from_complex(b));
}

// Deterministic orthonormal tangent frame at p with e1 x e2 = p, so that
// angles sorted ascending run counterclockwise seen from outside the sphere.
struct TangentFrame {
    Vec3 e1, e2;
};

inline TangentFrame frame_at(const Vec3& p) {
    Vec3 up = std::abs(p.z) > 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 0.0, 1.0};
    Vec3 e1 = up.cross(p).normalized();
    Vec3 e2 = p.cross(e1).normalized();
    return {e1, e2};
}

inline double angle_in_frame(const Vec3& p, const TangentFrame& f, const Vec3& q) {
    Vec3 d = q - p * q.dot(p);  // project onto the tangent plane at p
    return std::atan2(d.dot(f.e2), d.dot(f.e1));
}

// One transversal crossing of a great circle with a polyline segment.
struct Crossing {
    double s = 0.0;        // circle parameter of the crossing in (0, 2pi)
    int edge = -1;         // edge id owning the segment
    int segment = -1;      // segment index within the strand
    double side = 0.0;     // >0: the pre-crossing side is LEFT of the stored strand direction
    Vec3 point;
    bool degenerate = false;
};

// Great circle through point p0 with initial direction d (unit, tangent):
// gamma(s) = p0 cos s + d sin s.
struct GreatCircle {
    Vec3 p0, d, normal;  // normal = p0 x d

    Vec3 at(double s) const { return p0 * std::cos(s) + d * std::sin(s); }
};

inline GreatCircle great_circle(const Vec3& p0, const Vec3& dir) {
    Vec3 d = (dir - p0 * dir.dot(p0)).normalized();
    return {p0, d, p0.cross(d).normalized()};
}

// Crossing of the circle with segment a->b (short chord).  Returns false when
// the segment does not cross the circle's plane or the crossing is too close
// to an endpoint to be trusted.
inline bool segment_crossing(const GreatCircle& gc, const Vec3& a, const Vec3& b, Crossing& out) {
    double fa = a.dot(gc.normal);
    double fb = b.dot(gc.normal);
    if (fa == 0.0 && fb == 0.0) return false;
    if ((fa > 0) == (fb > 0)) return false;
    double t = fa / (fa - fb);
    Vec3 c = (a + (b - a) * t).normalized();
    double s = std::atan2(c.dot(gc.d), c.dot(gc.p0));
    if (s < 0) s += 2.0 * std::acos(-1.0);
    Vec3 u = (b - a) - c * (b - a).dot(c);  // strand direction in the tangent plane
    double un = u.norm();
    if (un < 1e-14) return false;
    u = u * (1.0 / un);
    Vec3 left = c.cross(u);
    Vec3 gdir = gc.d * std::cos(s) - gc.p0 * std::sin(s);  // gamma'(s)
    double side = -gdir.dot(left);
    out.s = s;
    out.point = c;
    out.side = side;
    // Near-tangential crossings are unreliable.
    double seg_scale = std::max(std::abs(fa), std::abs(fb)) / std::max((a - b).norm(), 1e-14);
    out.degenerate = (std::abs(side) < 0.05) || (seg_scale < 1e-7) ||
                     (t < 1e-9) || (t > 1.0 - 1e-9);
    return true;
}

}  // namespace crtc
