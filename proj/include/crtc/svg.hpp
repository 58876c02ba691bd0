#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "crtc/analysis.hpp"
#include "crtc/dessin.hpp"
#include "crtc/errors.hpp"
#include "crtc/sphere.hpp"

namespace crtc {

// Deterministic SVG output: fixed formatting, elements ordered by id.  The
// sphere is drawn through the Lambert azimuthal equal-area projection about a
// center point; the antipode spreads onto the canvas boundary circle, which
// is where the point at infinity lands under the default center.

struct RenderStyle {
    double canvas = 840.0;
    double margin = 30.0;
    Vec3 center{0.0, 0.0, -1.0};
    bool suppress_bivalent = false;
    double stroke_width = 1.4;
    double marker_radius = 5.0;
};

namespace detail_svg {

inline std::string fmt(double v) {
    char buf[40];
    if (std::abs(v) < 5e-5) v = 0.0;  // avoids "-0.0000"
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

struct Projector {
    Vec3 center;
    TangentFrame frame;
    double scale, cx, cy;

    // Lambert azimuthal equal-area: rho = 2 sin(angular distance / 2).
    std::pair<double, double> operator()(const Vec3& q) const {
        double cosang = std::max(-1.0, std::min(1.0, center.dot(q)));
        double rho = std::sqrt(std::max(0.0, 2.0 * (1.0 - cosang)));
        Vec3 t = q - center * cosang;
        double tx = t.dot(frame.e1), ty = t.dot(frame.e2);
        double tn = std::hypot(tx, ty);
        double ux = tn > 1e-14 ? tx / tn : 1.0;
        double uy = tn > 1e-14 ? ty / tn : 0.0;
        return {cx + scale * rho * ux, cy - scale * rho * uy};
    }
};

inline const char* black_fill(int color) {
    return static_cast<BlackColor>(color) == BlackColor::cyan ? "#00a6a6" : "#c9a800";
}
inline const char* white_stroke(int color) {
    switch (static_cast<WhiteColor>(color)) {
        case WhiteColor::red: return "#cc2222";
        case WhiteColor::blue: return "#2244cc";
        default: return "#22a022";
    }
}

}  // namespace detail_svg

// Chooses a projection center at least 0.1 rad away from every vertex,
// rotating through a deterministic candidate list before giving up.
inline Vec3 admissible_center(const Dessin& d, Vec3 preferred) {
    auto ok = [&](const Vec3& c) {
        for (const auto& v : d.vertices)
            if (std::acos(std::max(-1.0, std::min(1.0, c.dot(v.pos)))) < 0.1) return false;
        return true;
    };
    if (ok(preferred)) return preferred;
    for (int k = 0; k < 64; ++k) {
        Vec3 c = detail::fib_dir(29 + 13 * k);
        if (ok(c)) return c;
    }
    throw ProjectionClash("no admissible projection center found");
}

inline std::string render_svg(const Dessin& d, RenderStyle style = {}) {
    using detail_svg::fmt;
    detail_svg::Projector proj;
    proj.center = admissible_center(d, style.center);
    proj.frame = frame_at(proj.center);
    proj.cx = style.canvas / 2.0;
    proj.cy = style.canvas / 2.0;
    proj.scale = (style.canvas / 2.0 - style.margin) / 2.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(style.canvas) +
           "\" height=\"" + fmt(style.canvas) + "\" viewBox=\"0 0 " + fmt(style.canvas) + " " +
           fmt(style.canvas) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<circle cx=\"" + fmt(proj.cx) + "\" cy=\"" + fmt(proj.cy) + "\" r=\"" +
           fmt(2.0 * proj.scale) + "\" fill=\"none\" stroke=\"#dddddd\"/>\n";

    for (const auto& e : d.edges) {
        out += "<polyline class=\"strand\" fill=\"none\" stroke=\"#444444\" stroke-width=\"" +
               fmt(style.stroke_width) + "\" points=\"";
        for (size_t i = 0; i < e.strand.size(); ++i) {
            auto [x, y] = proj(e.strand[i]);
            if (i) out += " ";
            out += fmt(x) + "," + fmt(y);
        }
        out += "\"/>\n";
    }

    const double r = style.marker_radius;
    for (const auto& v : d.vertices) {
        auto [x, y] = proj(v.pos);
        switch (v.kind) {
            case VertexKind::black:
                out += "<circle class=\"black-vertex\" cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) +
                       "\" r=\"" + fmt(r) + "\" fill=\"" + detail_svg::black_fill(v.color) +
                       "\" stroke=\"black\"/>\n";
                break;
            case VertexKind::white:
                if (style.suppress_bivalent && v.degree == 2) break;
                out += "<circle class=\"white-vertex\" cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) +
                       "\" r=\"" + fmt(r) + "\" fill=\"white\" stroke=\"" +
                       detail_svg::white_stroke(v.color) + "\" stroke-width=\"2\"/>\n";
                break;
            case VertexKind::cross: {
                double s = r * 1.1;
                out += "<g class=\"cross-vertex\" stroke=\"#cc2222\" stroke-width=\"2\">";
                out += "<line x1=\"" + fmt(x - s) + "\" y1=\"" + fmt(y - s) + "\" x2=\"" +
                       fmt(x + s) + "\" y2=\"" + fmt(y + s) + "\"/>";
                out += "<line x1=\"" + fmt(x - s) + "\" y1=\"" + fmt(y + s) + "\" x2=\"" +
                       fmt(x + s) + "\" y2=\"" + fmt(y - s) + "\"/>";
                out += "</g>\n";
                break;
            }
            case VertexKind::monochrome:
                out += "<rect class=\"mono-vertex\" x=\"" + fmt(x - r * 0.7) + "\" y=\"" +
                       fmt(y - r * 0.7) + "\" width=\"" + fmt(1.4 * r) + "\" height=\"" +
                       fmt(1.4 * r) + "\" fill=\"#777777\"/>\n";
                break;
        }
    }
    out += "</svg>\n";
    return out;
}

// Scatter plot of a parameter-plane locus; flagged samples in red.
inline std::string render_locus_svg(const std::vector<LocusSample>& locus,
                                    double canvas = 840.0) {
    using detail_svg::fmt;
    double rlo = 1e300, rhi = -1e300, ilo = 1e300, ihi = -1e300;
    for (const auto& s : locus) {
        rlo = std::min(rlo, s.a.real());
        rhi = std::max(rhi, s.a.real());
        ilo = std::min(ilo, s.a.imag());
        ihi = std::max(ihi, s.a.imag());
    }
    if (locus.empty()) {
        rlo = ilo = -1.0;
        rhi = ihi = 1.0;
    }
    if (rhi - rlo < 1e-12) rhi = rlo + 1.0;
    if (ihi - ilo < 1e-12) ihi = ilo + 1.0;
    const double margin = 40.0;
    double sx = (canvas - 2 * margin) / (rhi - rlo);
    double sy = (canvas - 2 * margin) / (ihi - ilo);
    auto px = [&](double re) { return margin + (re - rlo) * sx; };
    auto py = [&](double im) { return canvas - margin - (im - ilo) * sy; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(canvas) + "\" height=\"" +
           fmt(canvas) + "\" viewBox=\"0 0 " + fmt(canvas) + " " + fmt(canvas) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    if (rlo <= 0.0 && rhi >= 0.0)
        out += "<line class=\"axis\" x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(margin) + "\" x2=\"" +
               fmt(px(0)) + "\" y2=\"" + fmt(canvas - margin) + "\" stroke=\"#cccccc\"/>\n";
    if (ilo <= 0.0 && ihi >= 0.0)
        out += "<line class=\"axis\" x1=\"" + fmt(margin) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" +
               fmt(canvas - margin) + "\" y2=\"" + fmt(py(0)) + "\" stroke=\"#cccccc\"/>\n";
    for (const auto& s : locus) {
        if (s.degenerate) continue;
        if (s.flagged)
            out += "<circle class=\"locus-point\" cx=\"" + fmt(px(s.a.real())) + "\" cy=\"" +
                   fmt(py(s.a.imag())) + "\" r=\"2.2\" fill=\"#cc2222\"/>\n";
        else
            out += "<circle class=\"grid-point\" cx=\"" + fmt(px(s.a.real())) + "\" cy=\"" +
                   fmt(py(s.a.imag())) + "\" r=\"0.8\" fill=\"#bbbbbb\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace crtc
