#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crtc/algebra.hpp"
#include "crtc/curve.hpp"
#include "crtc/errors.hpp"
#include "crtc/jmap.hpp"
#include "crtc/sphere.hpp"

namespace crtc {

enum class VertexKind : int { black = 0, white = 1, cross = 2, monochrome = 3 };
enum class ColorPair : int { RB = 0, BG = 1, RG = 2, undefined = 3 };

inline const char* to_string(VertexKind k) {
    switch (k) {
        case VertexKind::black: return "black";
        case VertexKind::white: return "white";
        case VertexKind::cross: return "cross";
        default: return "monochrome";
    }
}
inline const char* to_string(ColorPair p) {
    switch (p) {
        case ColorPair::RB: return "RB";
        case ColorPair::BG: return "BG";
        case ColorPair::RG: return "RG";
        default: return "?";
    }
}

// Singular fibers of pair 12, 23, 13 live in BG, RG, RB regions respectively.
inline ColorPair region_pair_of_cross(CrossPair c) {
    switch (c) {
        case CrossPair::s12: return ColorPair::BG;
        case CrossPair::s23: return ColorPair::RG;
        default: return ColorPair::RB;
    }
}

inline ColorPair pair_of_whites(bool has_red, bool has_blue, bool has_green) {
    if (has_red && has_blue && !has_green) return ColorPair::RB;
    if (!has_red && has_blue && has_green) return ColorPair::BG;
    if (has_red && !has_blue && has_green) return ColorPair::RG;
    return ColorPair::undefined;
}

struct DessinVertex {
    int id = -1;
    VertexKind kind = VertexKind::black;
    int color = -1;  // BlackColor / WhiteColor / CrossPair index; -1 for monochrome
    Vec3 pos;
    Complex plane{0.0, 0.0};
    bool at_infinity = false;
    int multiplicity = 1;
    int degree = 0;
    double jvalue = 0.0;  // meaningful for monochrome vertices only
};

struct DessinEdge {
    int id = -1;
    int tail = -1;            // low-j endpoint (black or monochrome)
    int head = -1;            // high-j endpoint (monochrome or white)
    int family = -1;          // index into gamma_arcs()
    std::vector<Vec3> strand;  // tail -> head
};

struct Region {
    int id = -1;
    std::vector<int> walks;
    ColorPair pair = ColorPair::undefined;
    bool pair_clean = false;
    int size = 0;  // white-vertex incidences along the boundary
    std::vector<int> crosses;
    int cross_multiplicity = 0;
};

struct Dessin {
    TrigonalCurve curve;
    int n = 0;           // cover degree; drives the 6n edge count
    int max_degree = 0;  // max component degree
    int resolution = 0;
    std::vector<DessinVertex> vertices;
    std::vector<DessinEdge> edges;
    std::vector<std::vector<int>> rotation;  // per vertex: outgoing half-edges, CCW
    std::vector<std::vector<int>> walks;     // face orbits of half-edges
    std::vector<int> face_of_half;
    std::vector<int> region_of_walk;
    std::vector<Region> regions;
    int component_count = 0;

    int tail_of(int h) const {
        const DessinEdge& e = edges[static_cast<size_t>(h / 2)];
        return (h & 1) ? e.head : e.tail;
    }
    int head_of(int h) const {
        const DessinEdge& e = edges[static_cast<size_t>(h / 2)];
        return (h & 1) ? e.tail : e.head;
    }

    int count_kind(VertexKind k) const {
        int c = 0;
        for (const auto& v : vertices)
            if (v.kind == k) ++c;
        return c;
    }

    // Edge count convention: a chain through monochrome vertices is one
    // edge, so a monochrome vertex of degree 2e collapses e pieces.
    int merged_edge_count() const {
        int c = static_cast<int>(edges.size());
        for (const auto& v : vertices)
            if (v.kind == VertexKind::monochrome) c -= v.degree / 2;
        return c;
    }
};

inline bool is_simple(const Dessin& d) {
    for (const auto& v : d.vertices) {
        if (v.kind == VertexKind::monochrome) return false;
        if (v.kind == VertexKind::black && v.degree != 3) return false;
        if (v.kind == VertexKind::white && v.degree != 2) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Min-cost perfect assignment (Hungarian, O(n^3)); cost is row x col.

inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return {};
    const double kInf = 1e30;
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// ---------------------------------------------------------------------------
// Strand tracing, shared by the dessin builder (gamma arcs) and the real
// preimage extension (positive / negative arcs).  Strands are polylines on
// the sphere parametrized by u in [0,1]; u maps to a j level per arc kind.

namespace trace {

struct EndTarget {
    int vertex = -1;
    Vec3 pos;
    int capacity = 1;  // strands of this family ending at the vertex
};

struct Split {
    double u = 0.0;
    struct MonoTarget {
        int vertex = -1;
        Vec3 pos;
        int capacity = 1;  // strands attaching from each side
    };
    std::vector<MonoTarget> monos;
};

struct RawStrand {
    std::vector<Vec3> pts;  // increasing u
    int tail = -1;
    int head = -1;
};

struct FamilyPlan {
    const Arc* arc = nullptr;
    std::vector<Split> splits;            // sorted by u, strictly inside (0,1)
    std::vector<EndTarget> low_targets;   // u = 0 endpoint classes
    std::vector<EndTarget> high_targets;  // u = 1 endpoint classes
};

inline double u_to_j(const Arc& arc, double u) {
    switch (arc.kind) {
        case Arc::Kind::gamma: return u;
        case Arc::Kind::positive: return 1.0 / std::max(u, 1e-300);
        default: return -u / std::max(1.0 - u, 1e-300);
    }
}

inline double j_to_u(const Arc& arc, double j) {
    switch (arc.kind) {
        case Arc::Kind::gamma: return j;
        case Arc::Kind::positive: return 1.0 / j;
        default: return -j / (1.0 - j);
    }
}

class Tracer {
public:
    Tracer(const TrigonalCurve& c, const SolveOptions& opt) : curve_(c), opt_(opt) {}

    // Solves p - lambda q at the j level of u on the arc.  Returns exactly
    // cover_degree sphere points: multiplicities expanded, infinity padded.
    std::vector<Vec3> solve_at(const Arc& arc, double u) const {
        Complex lam = arc.lambda(arc.t_for_j(u_to_j(arc, u)));
        Poly f = curve_.p - lam * curve_.q;
        std::vector<Vec3> pts;
        if (f.degree() >= 1) {
            RootSet rs = all_roots(f, opt_);
            for (const RootEntry& r : rs.roots) {
                Complex x = r.value;
                if (std::abs(x) > 10.0) x = polish_reversed(f, x);
                Vec3 s = sphere_from_complex(x);
                for (int i = 0; i < r.multiplicity; ++i) pts.push_back(s);
            }
        }
        while (static_cast<int>(pts.size()) < curve_.cover_degree) pts.push_back(sphere_north());
        return pts;
    }

    std::vector<RawStrand> trace_family(const FamilyPlan& plan, int resolution) const {
        const int m = curve_.cover_degree;
        std::vector<double> bounds;
        bounds.push_back(0.0);
        for (const Split& s : plan.splits) bounds.push_back(s.u);
        bounds.push_back(1.0);

        struct Seg {
            std::vector<RawStrand> cols;
            double ufirst = 0.0, ulast = 0.0;
        };
        std::vector<Seg> segs;
        for (size_t k = 0; k + 1 < bounds.size(); ++k) {
            Seg s;
            std::vector<double> grid = segment_grid(bounds[k], bounds[k + 1], resolution);
            s.ufirst = grid.front();
            s.ulast = grid.back();
            s.cols = trace_segment(*plan.arc, grid, m);
            segs.push_back(std::move(s));
        }

        attach_end(*plan.arc, segs.front().cols, 0.0, segs.front().ufirst, true,
                   plan.low_targets);
        attach_end(*plan.arc, segs.back().cols, 1.0, segs.back().ulast, false,
                   plan.high_targets);

        for (size_t k = 0; k < plan.splits.size(); ++k)
            stitch(*plan.arc, segs[k].cols, segs[k + 1].cols, plan.splits[k], segs[k].ulast,
                   segs[k + 1].ufirst);

        std::vector<RawStrand> out;
        for (auto& seg : segs)
            for (auto& s : seg.cols)
                if (!s.pts.empty()) out.push_back(std::move(s));
        return out;
    }

private:
    static std::vector<double> segment_grid(double lo, double hi, int resolution) {
        std::vector<double> grid;
        for (int i = 1; i < resolution; ++i) {
            double u = static_cast<double>(i) / resolution;
            if (u > lo + 1e-12 && u < hi - 1e-12) grid.push_back(u);
        }
        if (grid.empty()) grid.push_back(0.5 * (lo + hi));
        return grid;
    }

    static Complex polish_reversed(const Poly& f, Complex x) {
        Poly g = f.reversed(f.degree());
        Complex w = 1.0 / x;
        for (int it = 0; it < 4; ++it) {
            auto [v, dv] = g.eval_with_derivative(w);
            if (std::abs(dv) < 1e-300) return x;
            Complex wn = w - v / dv;
            if (!is_finite(wn)) return x;
            w = wn;
        }
        if (std::abs(w) < 1e-300) return Complex(1e200, 0.0);
        Complex xn = 1.0 / w;
        return std::abs(xn - x) <= 0.5 * std::abs(x) ? xn : x;
    }

    std::vector<Vec3> solve_dedup(const Arc& arc, double u) const {
        double ushift = u;
        for (int attempt = 0;; ++attempt) {
            std::vector<Vec3> pts = solve_at(arc, ushift);
            bool dup = false;
            for (size_t i = 0; i < pts.size() && !dup; ++i)
                for (size_t j = i + 1; j < pts.size(); ++j)
                    if (chordal(pts[i], pts[j]) < 1e-11) {
                        dup = true;
                        break;
                    }
            if (!dup || attempt >= 3) return pts;
            ushift = std::min(1.0 - 1e-12, ushift * (1.0 + 3e-8) + 1e-13);
        }
    }

    // Per-point safety: each matched move must be small against the point's
    // clearance to every other strand at both ends of the step.
    static bool step_ok(const std::vector<Vec3>& prev, const std::vector<Vec3>& cur,
                        const std::vector<int>& match) {
        const size_t m = prev.size();
        for (size_t i = 0; i < m; ++i) {
            double disp = chordal(prev[i], cur[match[i]]);
            if (disp < 1e-13) continue;
            if (disp > 0.35) return false;
            double clear = 1e9;
            for (size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                clear = std::min(clear, chordal(prev[i], prev[j]));
                clear = std::min(clear, chordal(cur[match[i]], cur[match[j]]));
            }
            if (disp > 0.5 * clear) return false;
        }
        return true;
    }

    static std::vector<int> match_points(const std::vector<Vec3>& prev,
                                         const std::vector<Vec3>& cur) {
        const size_t m = prev.size();
        std::vector<std::vector<double>> cost(m, std::vector<double>(m));
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) cost[i][j] = chordal(prev[i], cur[j]);
        return min_cost_assignment(cost);
    }

    using Commit = std::function<void(size_t, const Vec3&)>;

    // Moves the bundle from u0 (positions prev) to u1, bisecting in u while
    // the matching is ambiguous.  Each accepted intermediate position is
    // handed to commit in traversal order.
    std::vector<Vec3> advance(const Arc& arc, std::vector<Vec3> prev, double u0, double u1,
                              int depth, const Commit& commit) const {
        std::vector<Vec3> cur = solve_dedup(arc, u1);
        std::vector<int> match = match_points(prev, cur);
        if (!step_ok(prev, cur, match)) {
            if (std::abs(u1 - u0) < 1e-9 || depth > 60)
                throw TraceAmbiguity("strand matching did not stabilize near u=" +
                                     std::to_string(u1));
            double mid = 0.5 * (u0 + u1);
            std::vector<Vec3> at_mid = advance(arc, std::move(prev), u0, mid, depth + 1, commit);
            return advance(arc, std::move(at_mid), mid, u1, depth + 1, commit);
        }
        std::vector<Vec3> ordered(prev.size());
        for (size_t i = 0; i < prev.size(); ++i) {
            ordered[i] = cur[match[i]];
            commit(i, ordered[i]);
        }
        return ordered;
    }

    std::vector<RawStrand> trace_segment(const Arc& arc, const std::vector<double>& grid,
                                         int m) const {
        std::vector<RawStrand> cols(m);
        std::vector<Vec3> prev = solve_dedup(arc, grid[0]);
        for (int i = 0; i < m; ++i) cols[i].pts.push_back(prev[i]);
        Commit commit = [&](size_t i, const Vec3& p) { cols[i].pts.push_back(p); };
        for (size_t g = 1; g < grid.size(); ++g)
            prev = advance(arc, std::move(prev), grid[g - 1], grid[g], 0, commit);
        return cols;
    }

    // Geometric refinement toward an endpoint until every strand end can be
    // assigned to a target vertex with a clean margin.
    void attach_end(const Arc& arc, std::vector<RawStrand>& cols, double boundary,
                    double inner, bool low_end, const std::vector<EndTarget>& targets) const {
        const size_t m = cols.size();
        int total_capacity = 0;
        for (const auto& t : targets) total_capacity += t.capacity;
        if (total_capacity != static_cast<int>(m))
            throw TraceAmbiguity("endpoint capacity mismatch: " + std::to_string(total_capacity) +
                                 " vs " + std::to_string(m));

        std::vector<int> copy_vertex;
        std::vector<Vec3> copy_pos;
        for (const auto& t : targets)
            for (int k = 0; k < t.capacity; ++k) {
                copy_vertex.push_back(t.vertex);
                copy_pos.push_back(t.pos);
            }

        Commit commit = [&](size_t i, const Vec3& p) {
            if (low_end)
                cols[i].pts.insert(cols[i].pts.begin(), p);
            else
                cols[i].pts.push_back(p);
        };

        std::vector<Vec3> prev(m);
        for (size_t i = 0; i < m; ++i)
            prev[i] = low_end ? cols[i].pts.front() : cols[i].pts.back();

        // Separation of distinct targets bounds how close the ends must get;
        // with a single target any convergent bundle is unambiguous.
        double min_gap = 1.5;
        for (size_t i = 0; i < copy_pos.size(); ++i)
            for (size_t j = i + 1; j < copy_pos.size(); ++j)
                if (copy_vertex[i] != copy_vertex[j])
                    min_gap = std::min(min_gap, chordal(copy_pos[i], copy_pos[j]));

        const double delta0 = std::abs(inner - boundary);
        double u_prev = inner;
        std::vector<int> assign;
        bool done = false;
        int t = 1;
        for (; t <= 70 && !done; ++t) {
            double u = low_end ? boundary + delta0 * std::pow(0.5, t)
                               : boundary - delta0 * std::pow(0.5, t);
            prev = advance(arc, std::move(prev), u_prev, u, 0, commit);
            u_prev = u;

            std::vector<std::vector<double>> cost(m, std::vector<double>(m));
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < m; ++j) cost[i][j] = chordal(prev[i], copy_pos[j]);
            assign = min_cost_assignment(cost);
            bool safe = true;
            double maxd = 0.0;
            for (size_t i = 0; i < m && safe; ++i) {
                int tv = copy_vertex[assign[i]];
                double d1 = chordal(prev[i], copy_pos[assign[i]]);
                maxd = std::max(maxd, d1);
                double d2 = 1e30;
                for (size_t j = 0; j < copy_pos.size(); ++j)
                    if (copy_vertex[j] != tv) d2 = std::min(d2, chordal(prev[i], copy_pos[j]));
                if (d1 > 0.3 * d2) safe = false;
            }
            if (safe && maxd <= std::max(2e-3, 0.2 * min_gap)) done = true;
        }
        if (!done) throw TraceAmbiguity("endpoint attachment did not stabilize");

        // A few more halvings purely for tangent quality near the vertex
        // (high-multiplicity vertices converge like a slow fractional power).
        for (int extra = 0; extra < 20; ++extra) {
            double maxd = 0.0;
            for (size_t i = 0; i < m; ++i)
                maxd = std::max(maxd, chordal(prev[i], copy_pos[assign[i]]));
            if (maxd <= 2e-3) break;
            double u = low_end ? boundary + delta0 * std::pow(0.5, t + extra)
                               : boundary - delta0 * std::pow(0.5, t + extra);
            prev = advance(arc, std::move(prev), u_prev, u, 0, commit);
            u_prev = u;
        }

        for (size_t i = 0; i < m; ++i) {
            int tv = copy_vertex[assign[i]];
            commit(i, copy_pos[assign[i]]);
            if (low_end)
                cols[i].tail = tv;
            else
                cols[i].head = tv;
        }
    }

    // Joins two segment bundles across a split: strands falling into a
    // monochrome vertex attach there; the rest pass through and concatenate.
    void stitch(const Arc& arc, std::vector<RawStrand>& below, std::vector<RawStrand>& above,
                const Split& split, double u_below, double u_above) const {
        const size_t m = below.size();

        std::vector<Vec3> bend(m), astart(m);
        for (size_t i = 0; i < m; ++i) {
            bend[i] = below[i].pts.back();
            astart[i] = above[i].pts.front();
        }
        Commit commit_b = [&](size_t i, const Vec3& p) { below[i].pts.push_back(p); };
        Commit commit_a = [&](size_t i, const Vec3& p) {
            above[i].pts.insert(above[i].pts.begin(), p);
        };

        const double db0 = split.u - u_below;
        const double da0 = u_above - split.u;
        double ub_prev = u_below, ua_prev = u_above;
        for (int t = 1; t <= 62; ++t) {
            double ub = split.u - db0 * std::pow(0.5, t);
            double ua = split.u + da0 * std::pow(0.5, t);
            bend = advance(arc, std::move(bend), ub_prev, ub, 0, commit_b);
            astart = advance(arc, std::move(astart), ua_prev, ua, 0, commit_a);
            ub_prev = ub;
            ua_prev = ua;

            std::vector<int> below_mono(m, -1), above_mono(m, -1);
            bool clean = true;
            for (size_t mi = 0; mi < split.monos.size() && clean; ++mi) {
                const auto& mt = split.monos[mi];
                clean = pick_nearest(bend, mt.pos, mt.capacity, static_cast<int>(mi), below_mono) &&
                        pick_nearest(astart, mt.pos, mt.capacity, static_cast<int>(mi), above_mono);
            }
            if (!clean) continue;

            std::vector<int> bfree, afree;
            for (size_t i = 0; i < m; ++i) {
                if (below_mono[i] < 0) bfree.push_back(static_cast<int>(i));
                if (above_mono[i] < 0) afree.push_back(static_cast<int>(i));
            }
            if (bfree.size() != afree.size()) continue;
            std::vector<int> pairing(bfree.size(), -1);
            if (!bfree.empty()) {
                std::vector<std::vector<double>> cost(bfree.size(),
                                                      std::vector<double>(afree.size()));
                for (size_t i = 0; i < bfree.size(); ++i)
                    for (size_t j = 0; j < afree.size(); ++j)
                        cost[i][j] = chordal(bend[bfree[i]], astart[afree[j]]);
                pairing = min_cost_assignment(cost);
                for (size_t i = 0; i < bfree.size() && clean; ++i) {
                    double g = cost[i][pairing[i]];
                    double dmono = 1e30;
                    for (const auto& mt : split.monos)
                        dmono = std::min(dmono, chordal(bend[bfree[i]], mt.pos));
                    if (!split.monos.empty() && g > 0.25 * dmono) clean = false;
                }
            }
            if (!clean) continue;

            for (size_t i = 0; i < m; ++i) {
                if (below_mono[i] >= 0) {
                    const auto& mt = split.monos[below_mono[i]];
                    below[i].pts.push_back(mt.pos);
                    below[i].head = mt.vertex;
                }
                if (above_mono[i] >= 0) {
                    const auto& mt = split.monos[above_mono[i]];
                    above[i].pts.insert(above[i].pts.begin(), mt.pos);
                    above[i].tail = mt.vertex;
                }
            }
            for (size_t i = 0; i < bfree.size(); ++i) {
                RawStrand& b = below[bfree[i]];
                RawStrand& a = above[afree[pairing[i]]];
                b.pts.insert(b.pts.end(), a.pts.begin(), a.pts.end());
                b.head = a.head;
                a.pts.clear();
                a.tail = a.head = -1;
                // The concatenated strand must stay visible to the next split's
                // stitch, which reads the `above` bundle.
                std::swap(above[afree[pairing[i]]], below[bfree[i]]);
            }
            return;
        }
        throw TraceAmbiguity("monochrome stitch did not stabilize at j=" +
                             std::to_string(u_to_j(arc, split.u)));
    }

    // True when exactly `cap` unowned ends sit decisively nearer to pos than
    // the rest.
    static bool pick_nearest(const std::vector<Vec3>& ends, const Vec3& pos, int cap, int mark,
                             std::vector<int>& owner) {
        std::vector<std::pair<double, size_t>> d;
        for (size_t i = 0; i < ends.size(); ++i)
            if (owner[i] < 0) d.emplace_back(chordal(ends[i], pos), i);
        if (static_cast<int>(d.size()) < cap) return false;
        std::sort(d.begin(), d.end());
        double dmax = d[cap - 1].first;
        double dnext = (static_cast<int>(d.size()) > cap) ? d[cap].first : 1e30;
        if (dmax > 0.3 * dnext) return false;
        for (int i = 0; i < cap; ++i) owner[d[i].second] = mark;
        return true;
    }

    const TrigonalCurve& curve_;
    SolveOptions opt_;
};

}  // namespace trace

// ---------------------------------------------------------------------------
// Rotation system, faces and regions

namespace detail {

inline Vec3 tangent_probe(const DessinEdge& e, bool from_tail, const Vec3& vpos) {
    const auto& pts = e.strand;
    const double kMin = 1e-5;
    if (from_tail) {
        for (const Vec3& p : pts)
            if (chordal(p, vpos) >= kMin) return p;
    } else {
        for (size_t i = pts.size(); i-- > 0;)
            if (chordal(pts[i], vpos) >= kMin) return pts[i];
    }
    return from_tail ? pts.back() : pts.front();
}

inline void build_rotation(Dessin& d) {
    d.rotation.assign(d.vertices.size(), {});
    std::vector<std::vector<std::pair<double, int>>> ang(d.vertices.size());
    for (const DessinEdge& e : d.edges) {
        const DessinVertex& vt = d.vertices[e.tail];
        const DessinVertex& vh = d.vertices[e.head];
        double at = angle_in_frame(vt.pos, frame_at(vt.pos), tangent_probe(e, true, vt.pos));
        double ah = angle_in_frame(vh.pos, frame_at(vh.pos), tangent_probe(e, false, vh.pos));
        ang[e.tail].push_back({at, 2 * e.id});
        ang[e.head].push_back({ah, 2 * e.id + 1});
    }
    for (size_t v = 0; v < d.vertices.size(); ++v) {
        auto& list = ang[v];
        std::sort(list.begin(), list.end());
        for (size_t i = 0; i + 1 < list.size(); ++i)
            if (list[i + 1].first - list[i].first < 1e-7)
                throw TraceAmbiguity("coincident strand tangents at vertex " + std::to_string(v));
        for (auto& [a, h] : list) d.rotation[v].push_back(h);
        d.vertices[v].degree = static_cast<int>(list.size());
    }
}

// Face orbits of h -> predecessor-of-twin(h) in the rotation at head(h);
// each face lies to the LEFT of its directed half-edges.
inline void build_walks(Dessin& d) {
    const int hcount = 2 * static_cast<int>(d.edges.size());
    std::vector<int> pos(hcount, -1);
    for (const auto& rot : d.rotation)
        for (size_t i = 0; i < rot.size(); ++i) pos[rot[i]] = static_cast<int>(i);

    auto next_in_face = [&](int h) {
        int v = d.head_of(h);
        const auto& rot = d.rotation[v];
        int i = pos[h ^ 1];
        int L = static_cast<int>(rot.size());
        return rot[(i - 1 + L) % L];
    };

    d.walks.clear();
    d.face_of_half.assign(hcount, -1);
    for (int h0 = 0; h0 < hcount; ++h0) {
        if (d.face_of_half[h0] >= 0) continue;
        int id = static_cast<int>(d.walks.size());
        d.walks.emplace_back();
        int h = h0;
        int guard = 0;
        do {
            if (d.face_of_half[h] >= 0)
                throw InconsistentEmbedding("face walk collided with another walk");
            d.face_of_half[h] = id;
            d.walks.back().push_back(h);
            h = next_in_face(h);
            if (++guard > hcount + 1)
                throw InconsistentEmbedding("face walk failed to close");
        } while (h != h0);
    }
}

inline int component_count_of(const Dessin& d, std::vector<int>* labels_out = nullptr) {
    std::vector<int> parent(d.vertices.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const DessinEdge& e : d.edges) parent[find(e.tail)] = find(e.head);
    std::set<int> comps;
    std::vector<int> labels(d.vertices.size(), -1);
    for (const auto& v : d.vertices)
        if (v.kind != VertexKind::cross) {
            labels[v.id] = find(v.id);
            comps.insert(labels[v.id]);
        }
    if (labels_out) *labels_out = labels;
    return static_cast<int>(comps.size());
}

// All transversal crossings of a great circle with the strand polylines,
// ordered along the circle.  Returns false when any crossing is unreliable.
inline bool circle_crossings(const Dessin& d, const GreatCircle& gc, std::vector<Crossing>& out) {
    out.clear();
    for (const DessinEdge& e : d.edges) {
        for (size_t i = 0; i + 1 < e.strand.size(); ++i) {
            Crossing c;
            if (!segment_crossing(gc, e.strand[i], e.strand[i + 1], c)) continue;
            if (c.degenerate) return false;
            for (const auto& v : d.vertices)
                if (chordal(c.point, v.pos) < 1e-7) return false;
            c.edge = e.id;
            c.segment = static_cast<int>(i);
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Crossing& a, const Crossing& b) { return a.s < b.s; });
    for (size_t i = 0; i + 1 < out.size(); ++i)
        if (out[i + 1].s - out[i].s < 1e-10) return false;
    return true;
}

inline int walk_on_near_side(const Dessin& d, const Crossing& c) {
    int h = 2 * c.edge;  // directed along the stored strand
    return c.side > 0 ? d.face_of_half[h] : d.face_of_half[h ^ 1];
}
inline int walk_on_far_side(const Dessin& d, const Crossing& c) {
    int h = 2 * c.edge;
    return c.side > 0 ? d.face_of_half[h ^ 1] : d.face_of_half[h];
}

inline Vec3 fib_dir(int k) {
    const int N = 1021;
    double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    double i = static_cast<double>(k % N) + 0.5;
    double z = 1.0 - 2.0 * i / N;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = 2.0 * std::acos(-1.0) * i / golden;
    return Vec3{r * std::cos(th), r * std::sin(th), z}.normalized();
}

// Groups face walks into geometric regions of the sphere.  For one component
// the walks already are regions; for several, walks bounding a common region
// are united via crossing sequences along probe circles until the
// Euler-derived count is reached.  Every union performed is justified by a
// circle passage, so reaching the count certifies the grouping.
inline void group_regions(Dessin& d) {
    const int W = static_cast<int>(d.walks.size());
    std::vector<int> parent(W);
    for (int i = 0; i < W; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };

    int v_gamma = 0;
    for (const auto& v : d.vertices)
        if (v.kind != VertexKind::cross) ++v_gamma;
    const int target = d.component_count + static_cast<int>(d.edges.size()) - v_gamma + 1;

    auto class_count = [&]() {
        std::set<int> c;
        for (int i = 0; i < W; ++i) c.insert(find(i));
        return static_cast<int>(c.size());
    };

    int classes = W;
    for (int k = 0; k < 900 && classes > target; ++k) {
        Vec3 a = fib_dir(2 * k + 1);
        Vec3 b = fib_dir(510 + 7 * k);
        if (std::abs(a.dot(b)) > 0.98) continue;
        GreatCircle gc = great_circle(a, b);
        std::vector<Crossing> cr;
        if (!circle_crossings(d, gc, cr) || cr.size() < 2) continue;
        for (size_t i = 0; i < cr.size(); ++i) {
            const Crossing& c0 = cr[i];
            const Crossing& c1 = cr[(i + 1) % cr.size()];
            parent[find(walk_on_far_side(d, c0))] = find(walk_on_near_side(d, c1));
        }
        classes = class_count();
    }
    if (classes != target)
        throw InconsistentEmbedding("region grouping did not reach the Euler count (" +
                                    std::to_string(classes) + " vs " + std::to_string(target) +
                                    ")");

    std::map<int, int> region_id;
    d.region_of_walk.assign(W, -1);
    d.regions.clear();
    for (int w = 0; w < W; ++w) {
        int root = find(w);
        auto [it, inserted] = region_id.try_emplace(root, static_cast<int>(d.regions.size()));
        if (inserted) {
            Region r;
            r.id = it->second;
            d.regions.push_back(r);
        }
        d.region_of_walk[w] = it->second;
        d.regions[it->second].walks.push_back(w);
    }

    for (Region& r : d.regions) {
        bool red = false, blue = false, green = false;
        int size = 0;
        for (int w : r.walks)
            for (int h : d.walks[w]) {
                const DessinVertex& head = d.vertices[d.head_of(h)];
                if (head.kind != VertexKind::white) continue;
                ++size;
                if (head.color == static_cast<int>(WhiteColor::red)) red = true;
                if (head.color == static_cast<int>(WhiteColor::blue)) blue = true;
                if (head.color == static_cast<int>(WhiteColor::green)) green = true;
            }
        r.size = size;
        r.pair = pair_of_whites(red, blue, green);
        r.pair_clean = r.pair != ColorPair::undefined;
    }
}

// Region containing a point, via the first crossing along probe circles.
inline int locate_region(const Dessin& d, const Vec3& pos) {
    for (int k = 0; k < 64; ++k) {
        Vec3 dir = fib_dir(17 + 5 * k);
        Vec3 tang = dir - pos * dir.dot(pos);
        if (tang.norm() < 1e-3) continue;
        GreatCircle gc = great_circle(pos, tang);
        Crossing best;
        double bests = 1e30;
        for (const DessinEdge& e : d.edges) {
            for (size_t i = 0; i + 1 < e.strand.size(); ++i) {
                Crossing c;
                if (!segment_crossing(gc, e.strand[i], e.strand[i + 1], c)) continue;
                if (c.s < 1e-8) continue;
                if (c.s < bests) {
                    bests = c.s;
                    best = c;
                    best.edge = e.id;
                }
            }
        }
        if (bests > 1e29 || best.degenerate) continue;
        bool near_vertex = false;
        for (const auto& v : d.vertices)
            if (chordal(best.point, v.pos) < 1e-7) {
                near_vertex = true;
                break;
            }
        if (near_vertex) continue;
        return d.region_of_walk[walk_on_near_side(d, best)];
    }
    throw InconsistentEmbedding("point location failed: no usable probe direction");
}

inline void place_crosses(Dessin& d) {
    for (const DessinVertex& v : d.vertices) {
        if (v.kind != VertexKind::cross) continue;
        int r = locate_region(d, v.pos);
        d.regions[r].crosses.push_back(v.id);
        d.regions[r].cross_multiplicity += v.multiplicity;
    }
}

struct VertexFactory {
    Dessin* d;
    int infinity_claims = 0;

    int add(VertexKind kind, int color, Complex plane, bool at_inf, int mult, double jval = 0.0) {
        if (at_inf) ++infinity_claims;
        DessinVertex v;
        v.id = static_cast<int>(d->vertices.size());
        v.kind = kind;
        v.color = color;
        v.at_infinity = at_inf;
        v.plane = plane;
        v.pos = at_inf ? sphere_north() : sphere_from_complex(plane);
        v.multiplicity = mult;
        v.jvalue = jval;
        d->vertices.push_back(v);
        return v.id;
    }

    void add_class(const RootSet& rs, VertexKind kind, int color) {
        for (const RootEntry& r : rs.roots) add(kind, color, r.value, false, r.multiplicity);
        if (rs.degree_deficit > 0) add(kind, color, {}, true, rs.degree_deficit);
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Builder

inline Dessin build_dessin(const TrigonalCurve& c, int resolution = 100,
                           const SolveOptions& opt = {}) {
    if (resolution < 16)
        throw ValidationError("build_dessin: resolution must be at least 16");

    Dessin d;
    d.curve = c;
    d.n = c.cover_degree;
    d.max_degree = c.n;
    d.resolution = resolution;

    SpecialPoints sp = special_points(c, opt);

    detail::VertexFactory vf{&d};
    std::vector<std::vector<int>> black_ids(2), white_ids(3);
    for (int b = 0; b < 2; ++b) {
        size_t before = d.vertices.size();
        vf.add_class(sp.black[b], VertexKind::black, b);
        for (size_t i = before; i < d.vertices.size(); ++i)
            black_ids[b].push_back(static_cast<int>(i));
    }
    for (int w = 0; w < 3; ++w) {
        size_t before = d.vertices.size();
        vf.add_class(sp.white[w], VertexKind::white, w);
        for (size_t i = before; i < d.vertices.size(); ++i)
            white_ids[w].push_back(static_cast<int>(i));
    }
    vf.add_class(sp.crosses.s12, VertexKind::cross, static_cast<int>(CrossPair::s12));
    vf.add_class(sp.crosses.s23, VertexKind::cross, static_cast<int>(CrossPair::s23));
    vf.add_class(sp.crosses.s13, VertexKind::cross, static_cast<int>(CrossPair::s13));

    struct MonoInfo {
        int vertex;
        int family;
        double jr;
        int ram;
    };
    std::vector<MonoInfo> monos;
    for (const CriticalPoint& cp : sp.monochrome) {
        double jr = cp.j.value.real();
        Complex lam = cp.at_infinity ? c.p.leading() / c.q.leading() : c.p(cp.x) / c.q(cp.x);
        int fam = gamma_arc_of_lambda(lam, jr);
        if (fam < 0)
            throw TraceAmbiguity("monochrome point does not sit on the cross-ratio graph");
        int id = vf.add(VertexKind::monochrome, -1, cp.at_infinity ? Complex{} : cp.x,
                        cp.at_infinity, cp.multiplicity, jr);
        monos.push_back({id, fam, jr, cp.multiplicity + 1});
    }

    if (vf.infinity_claims > 1)
        throw InconsistentEmbedding("more than one vertex claims the point at infinity");

    trace::Tracer tracer(c, opt);
    const auto& arcs = gamma_arcs();
    for (int fam = 0; fam < 6; ++fam) {
        const Arc& arc = arcs[fam];
        trace::FamilyPlan plan;
        plan.arc = &arc;

        std::vector<MonoInfo> own;
        for (const MonoInfo& mi : monos)
            if (mi.family == fam) own.push_back(mi);
        std::sort(own.begin(), own.end(),
                  [](const MonoInfo& a, const MonoInfo& b) { return a.jr < b.jr; });
        for (const MonoInfo& mi : own) {
            double u = trace::j_to_u(arc, mi.jr);
            if (!plan.splits.empty() && std::abs(plan.splits.back().u - u) < 1e-11) {
                plan.splits.back().monos.push_back({mi.vertex, d.vertices[mi.vertex].pos, mi.ram});
            } else {
                trace::Split s;
                s.u = u;
                s.monos.push_back({mi.vertex, d.vertices[mi.vertex].pos, mi.ram});
                plan.splits.push_back(s);
            }
        }
        for (int id : black_ids[static_cast<int>(arc.black)]) {
            const DessinVertex& v = d.vertices[id];
            plan.low_targets.push_back({id, v.pos, v.multiplicity});
        }
        for (int id : white_ids[static_cast<int>(arc.white)]) {
            const DessinVertex& v = d.vertices[id];
            plan.high_targets.push_back({id, v.pos, v.multiplicity});
        }

        for (trace::RawStrand& s : tracer.trace_family(plan, resolution)) {
            if (s.tail < 0 || s.head < 0)
                throw TraceAmbiguity("strand left unattached after tracing");
            DessinEdge e;
            e.id = static_cast<int>(d.edges.size());
            e.tail = s.tail;
            e.head = s.head;
            e.family = fam;
            e.strand = std::move(s.pts);
            d.edges.push_back(std::move(e));
        }
    }

    detail::build_rotation(d);

    for (const DessinVertex& v : d.vertices) {
        bool ok = true;
        switch (v.kind) {
            case VertexKind::black: ok = (v.degree == 3 * v.multiplicity); break;
            case VertexKind::white: ok = (v.degree == 2 * v.multiplicity); break;
            case VertexKind::cross: ok = (v.degree == 0); break;
            case VertexKind::monochrome: ok = (v.degree == 2 * (v.multiplicity + 1)); break;
        }
        if (!ok)
            throw TraceAmbiguity("vertex degree inconsistent with its multiplicity (vertex " +
                                 std::to_string(v.id) + ")");
    }

    detail::build_walks(d);
    d.component_count = detail::component_count_of(d);
    detail::group_regions(d);
    detail::place_crosses(d);
    return d;
}

// Re-derives regions from the rotation system; InconsistentEmbedding surfaces
// any face walk that fails to close.
inline std::vector<Region> regions_of(Dessin d) {
    detail::build_walks(d);
    d.component_count = detail::component_count_of(d);
    detail::group_regions(d);
    detail::place_crosses(d);
    return d.regions;
}

// ---------------------------------------------------------------------------
// Structural report

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct StructuralReport {
    std::vector<CheckResult> checks;
    bool all_pass = true;

    void add(const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
        all_pass = all_pass && pass;
    }
    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

inline StructuralReport structural_report(const Dessin& d) {
    StructuralReport rep;
    const int n = d.n;
    std::ostringstream os;

    int merged = d.merged_edge_count();
    rep.add("edges_6n", merged == 6 * n,
            "merged edges = " + std::to_string(merged) + ", 6n = " + std::to_string(6 * n));

    int blacks = d.count_kind(VertexKind::black);
    int whites = d.count_kind(VertexKind::white);
    rep.add("black_at_most_2n", blacks <= 2 * n, "black vertices = " + std::to_string(blacks));
    rep.add("white_at_most_3n", whites <= 3 * n, "white vertices = " + std::to_string(whites));

    int pair_sum[3] = {0, 0, 0};
    bool pairs_clean = true;
    bool sizes_even = true;
    for (const Region& r : d.regions) {
        if (!r.pair_clean) pairs_clean = false;
        if (r.pair != ColorPair::undefined) pair_sum[static_cast<int>(r.pair)] += r.size;
        if (r.size % 2 != 0 || r.size == 0) sizes_even = false;
    }
    rep.add("regions_two_colored", pairs_clean, "every region shows exactly two white colors");
    rep.add("region_sizes_even", sizes_even, "all region sizes even and positive");
    os.str("");
    os << "RB/BG/RG sums = " << pair_sum[0] << "/" << pair_sum[1] << "/" << pair_sum[2]
       << ", expected " << 2 * n;
    rep.add("pair_sums_2n",
            pair_sum[0] == 2 * n && pair_sum[1] == 2 * n && pair_sum[2] == 2 * n, os.str());

    int R = static_cast<int>(d.regions.size());
    os.str("");
    os << "R = " << R << ", bounds [" << n + 2 << ", " << 3 * n << "]";
    rep.add("region_count_bounds", R >= n + 2 && R <= 3 * n, os.str());

    int v_gamma = 0;
    for (const auto& v : d.vertices)
        if (v.kind != VertexKind::cross) ++v_gamma;
    int euler_r = d.component_count + static_cast<int>(d.edges.size()) - v_gamma + 1;
    os.str("");
    os << "R = " << R << ", M + E - V + 1 = " << euler_r;
    rep.add("euler_relation", R == euler_r, os.str());

    bool cross_counts = true, cross_pairs = true;
    for (const Region& r : d.regions) {
        if (r.cross_multiplicity < 1 || r.cross_multiplicity > r.size / 2) cross_counts = false;
        for (int cid : r.crosses) {
            const DessinVertex& cv = d.vertices[cid];
            if (region_pair_of_cross(static_cast<CrossPair>(cv.color)) != r.pair)
                cross_pairs = false;
        }
    }
    rep.add("crosses_per_region", cross_counts,
            "every 2m-gon holds between 1 and m crosses (with multiplicity)");
    rep.add("cross_pair_labels", cross_pairs, "pairs 12/23/13 sit in BG/RG/RB regions");

    bool bipartite = true;
    for (const DessinEdge& e : d.edges) {
        VertexKind a = d.vertices[e.tail].kind;
        VertexKind b = d.vertices[e.head].kind;
        if (!((a == VertexKind::black || a == VertexKind::monochrome) &&
              (b == VertexKind::white || b == VertexKind::monochrome)))
            bipartite = false;
    }
    rep.add("edge_endpoints", bipartite, "edges run black/mono -> mono/white");

    return rep;
}

// ---------------------------------------------------------------------------
// Canonical signature of the embedded map: per component, the minimum over
// root half-edges of a breadth-first encoding of (rotation-successor, twin,
// tail label); regions contribute their pair/size/cross summary.  Used by the
// resolution-stability checks.

namespace detail {

inline std::string component_canonical(const Dessin& d, const std::vector<int>& roots,
                                       const std::vector<int>& rot_next) {
    std::string best;
    for (int root : roots) {
        std::map<int, int> label;
        std::vector<int> order;
        label[root] = 0;
        order.push_back(root);
        std::ostringstream enc;
        for (size_t k = 0; k < order.size(); ++k) {
            int h = order[k];
            for (int nxt : {rot_next[h], h ^ 1})
                if (!label.count(nxt)) {
                    label[nxt] = static_cast<int>(label.size());
                    order.push_back(nxt);
                }
            const DessinVertex& tail = d.vertices[d.tail_of(h)];
            enc << label[rot_next[h]] << ',' << label[h ^ 1] << ','
                << static_cast<int>(tail.kind) << ':' << tail.color << ':' << tail.multiplicity
                << ';';
        }
        std::string e = enc.str();
        if (best.empty() || e < best) best = e;
    }
    return best;
}

}  // namespace detail

inline std::string iso_signature(const Dessin& d) {
    const int hcount = 2 * static_cast<int>(d.edges.size());
    std::vector<int> rot_next(hcount, -1);
    for (const auto& rot : d.rotation)
        for (size_t i = 0; i < rot.size(); ++i) rot_next[rot[i]] = rot[(i + 1) % rot.size()];

    std::vector<int> labels;
    detail::component_count_of(d, &labels);
    std::map<int, std::vector<int>> comp_roots;
    for (const DessinEdge& e : d.edges) {
        // Roots only at black-side half-edges keeps the search small.
        comp_roots[labels[e.tail]].push_back(2 * e.id);
    }
    std::vector<std::string> parts;
    for (const auto& [comp, roots] : comp_roots)
        parts.push_back(detail::component_canonical(d, roots, rot_next));
    std::sort(parts.begin(), parts.end());

    std::vector<std::string> regs;
    for (const Region& r : d.regions) {
        std::vector<std::pair<int, int>> cr;
        for (int cid : r.crosses)
            cr.push_back({d.vertices[cid].color, d.vertices[cid].multiplicity});
        std::sort(cr.begin(), cr.end());
        std::ostringstream os;
        os << to_string(r.pair) << ':' << r.size << ':';
        for (auto& [col, mult] : cr) os << col << '.' << mult << ',';
        regs.push_back(os.str());
    }
    std::sort(regs.begin(), regs.end());

    std::ostringstream os;
    for (const auto& p : parts) os << p << '|';
    os << '#';
    for (const auto& r : regs) os << r << '|';
    return os.str();
}

}  // namespace crtc
