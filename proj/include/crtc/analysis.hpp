#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crtc/combinatorics.hpp"
#include "crtc/dessin.hpp"
#include "crtc/errors.hpp"

namespace crtc {

// ---------------------------------------------------------------------------
// Maximality: connected, no monochrome vertex, one cross vertex per region.
// A merged cross of higher multiplicity still counts as one vertex.

struct MaximalityResult {
    bool value = false;
    std::vector<std::string> reasons;
};

inline MaximalityResult is_maximal(const Dessin& d) {
    MaximalityResult res;
    if (d.component_count != 1)
        res.reasons.push_back("disconnected: " + std::to_string(d.component_count) +
                              " components");
    for (const auto& v : d.vertices)
        if (v.kind == VertexKind::monochrome) {
            res.reasons.push_back("monochrome vertex " + std::to_string(v.id) + " present");
            break;
        }
    for (const Region& r : d.regions)
        if (r.crosses.size() != 1)
            res.reasons.push_back("region " + std::to_string(r.id) + " has " +
                                  std::to_string(r.crosses.size()) + " crosses");
    res.value = res.reasons.empty();
    return res;
}

// ---------------------------------------------------------------------------
// Real preimage graph  D = j^{-1}(R P^1): the dessin plus the traced strands
// over j in (1, inf) and (-inf, 0), with the crosses and the real-critical
// monochrome vertices of D.

struct RealStrand {
    int id = -1;
    int tail = -1;  // combined vertex id at the u = 0 end
    int head = -1;
    int arc_index = -1;  // into extension_arcs()
    std::vector<Vec3> strand;
    int region = -1;  // dessin region the open strand lies in
};

struct RealPreimageGraph {
    Dessin dessin;
    std::vector<DessinVertex> extra_vertices;  // D-monochromes; ids continue after dessin's
    std::vector<RealStrand> strands;

    const DessinVertex& vertex(int id) const {
        int n = static_cast<int>(dessin.vertices.size());
        return id < n ? dessin.vertices[id] : extra_vertices[id - n];
    }
    int vertex_count() const {
        return static_cast<int>(dessin.vertices.size() + extra_vertices.size());
    }
};

inline RealPreimageGraph real_preimage(const TrigonalCurve& c, int resolution = 100,
                                       const SolveOptions& opt = {}) {
    RealPreimageGraph g;
    g.dessin = build_dessin(c, resolution, opt);
    const Dessin& d = g.dessin;

    // D-monochrome vertices: cross-ratio critical points with real critical
    // value outside [0,1].
    struct DMono {
        int vertex;
        int arc;
        double jr;
        int ram;
    };
    std::vector<DMono> dmonos;
    SpecialPoints sp = special_points(c, opt);
    int next_id = static_cast<int>(d.vertices.size());
    for (const CriticalPoint& cp : sp.cross_ratio_critical) {
        if (cp.j.pole) continue;
        double im = std::abs(cp.j.value.imag());
        double re = cp.j.value.real();
        if (im > kRealJTol * (1.0 + std::abs(cp.j.value))) continue;
        if (re >= -kRealJTol && re <= 1.0 + kRealJTol) continue;  // gamma-side or boundary
        Complex lam = cp.at_infinity ? c.p.leading() / c.q.leading() : c.p(cp.x) / c.q(cp.x);
        int arc = extension_arc_of_lambda(lam, re);
        if (arc < 0)
            throw TraceAmbiguity("real critical point off the extended cross-ratio graph");
        DessinVertex v;
        v.id = next_id++;
        v.kind = VertexKind::monochrome;
        v.color = -1;
        v.at_infinity = cp.at_infinity;
        v.plane = cp.at_infinity ? Complex{} : cp.x;
        v.pos = cp.at_infinity ? sphere_north() : sphere_from_complex(cp.x);
        v.multiplicity = cp.multiplicity;
        v.jvalue = re;
        g.extra_vertices.push_back(v);
        dmonos.push_back({v.id, arc, re, cp.multiplicity + 1});
    }

    // Endpoint classes per arc.
    std::vector<std::vector<int>> blacks(2), whites(3), crosses(3);
    for (const auto& v : d.vertices) {
        if (v.kind == VertexKind::black) blacks[v.color].push_back(v.id);
        if (v.kind == VertexKind::white) whites[v.color].push_back(v.id);
        if (v.kind == VertexKind::cross) crosses[v.color].push_back(v.id);
    }

    trace::Tracer tracer(c, opt);
    const auto& arcs = extension_arcs();
    for (int ai = 0; ai < 12; ++ai) {
        const Arc& arc = arcs[ai];
        trace::FamilyPlan plan;
        plan.arc = &arc;
        std::vector<DMono> own;
        for (const DMono& m : dmonos)
            if (m.arc == ai) own.push_back(m);
        std::sort(own.begin(), own.end(), [&](const DMono& a, const DMono& b) {
            return trace::j_to_u(arc, a.jr) < trace::j_to_u(arc, b.jr);
        });
        for (const DMono& m : own) {
            double u = trace::j_to_u(arc, m.jr);
            const Vec3 pos = g.vertex(m.vertex).pos;
            if (!plan.splits.empty() && std::abs(plan.splits.back().u - u) < 1e-11) {
                plan.splits.back().monos.push_back({m.vertex, pos, m.ram});
            } else {
                trace::Split s;
                s.u = u;
                s.monos.push_back({m.vertex, pos, m.ram});
                plan.splits.push_back(s);
            }
        }
        auto push_targets = [&](std::vector<trace::EndTarget>& tg, const std::vector<int>& ids) {
            for (int id : ids)
                tg.push_back({id, d.vertices[id].pos, d.vertices[id].multiplicity});
        };
        if (arc.kind == Arc::Kind::positive) {
            push_targets(plan.low_targets, crosses[static_cast<int>(arc.cross)]);
            push_targets(plan.high_targets, whites[static_cast<int>(arc.white)]);
        } else {
            push_targets(plan.low_targets, blacks[static_cast<int>(arc.black)]);
            push_targets(plan.high_targets, crosses[static_cast<int>(arc.cross)]);
        }

        for (trace::RawStrand& s : tracer.trace_family(plan, resolution)) {
            if (s.tail < 0 || s.head < 0)
                throw TraceAmbiguity("extension strand left unattached");
            RealStrand rs;
            rs.id = static_cast<int>(g.strands.size());
            rs.tail = s.tail;
            rs.head = s.head;
            rs.arc_index = ai;
            rs.strand = std::move(s.pts);
            g.strands.push_back(std::move(rs));
        }
    }

    // Locate each extension strand in a region of the dessin.
    for (RealStrand& s : g.strands) {
        const size_t L = s.strand.size();
        for (size_t probe : {L / 2, L / 3, 2 * L / 3, L / 4}) {
            if (probe == 0 || probe >= L) continue;
            try {
                s.region = detail::locate_region(d, s.strand[probe]);
                break;
            } catch (const InconsistentEmbedding&) {
                continue;
            }
        }
        if (s.region < 0)
            throw InconsistentEmbedding("extension strand could not be located in a region");
    }
    return g;
}

// True iff all crosses of the region hang on one connected piece of D inside
// the region, and that piece carries a monochrome vertex of D.
inline bool mergeable_region(const Dessin& d, const RealPreimageGraph& g, int region_id) {
    const Region& r = d.regions.at(region_id);
    if (r.crosses.size() < 2)
        throw ValidationError("mergeable_region: region has fewer than two crosses");

    std::vector<int> parent(g.vertex_count());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::set<int> monos_here;
    for (const RealStrand& s : g.strands) {
        if (s.region != region_id) continue;
        parent[find(s.tail)] = find(s.head);
        for (int v : {s.tail, s.head})
            if (g.vertex(v).kind == VertexKind::monochrome) monos_here.insert(v);
    }
    int root = find(r.crosses.front());
    for (int cid : r.crosses)
        if (find(cid) != root) return false;
    for (int m : monos_here)
        if (find(m) == root) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Graph surgeries

namespace detail {

// Removes vertices (by id) and compacts ids; the caller guarantees no edge
// touches a removed vertex.
inline void remove_vertices(Dessin& d, const std::set<int>& removed) {
    std::vector<int> remap(d.vertices.size(), -1);
    std::vector<DessinVertex> nv;
    std::vector<std::vector<int>> nrot;
    for (const auto& v : d.vertices) {
        if (removed.count(v.id)) continue;
        int nid = static_cast<int>(nv.size());
        remap[v.id] = nid;
        DessinVertex cp = v;
        cp.id = nid;
        nv.push_back(cp);
        nrot.push_back(d.rotation.empty() ? std::vector<int>{} : d.rotation[v.id]);
    }
    for (auto& e : d.edges) {
        e.tail = remap[e.tail];
        e.head = remap[e.head];
    }
    for (auto& r : d.regions) {
        std::vector<int> nc;
        for (int c : r.crosses)
            if (remap[c] >= 0) nc.push_back(remap[c]);
        r.crosses = nc;
    }
    d.vertices = std::move(nv);
    d.rotation = std::move(nrot);
}

}  // namespace detail

// Replaces the k crosses of a region by a single cross with summed
// multiplicity (the equisingular degeneration at the graph level).
inline Dessin merge_crosses(const Dessin& d, int region_id) {
    const Region& r = d.regions.at(region_id);
    if (r.crosses.size() < 2)
        throw NotMergeable("merge_crosses: region has fewer than two crosses");
    Dessin out = d;
    Region& reg = out.regions[region_id];

    int keep = reg.crosses.front();
    int mult = 0;
    std::set<int> removed;
    for (int cid : reg.crosses) {
        mult += out.vertices[cid].multiplicity;
        if (cid != keep) removed.insert(cid);
    }
    out.vertices[keep].multiplicity = mult;
    reg.crosses = {keep};
    reg.cross_multiplicity = mult;
    detail::remove_vertices(out, removed);
    return out;
}

// Connects the dessin by repeatedly merging the two nearest same-color white
// vertices from distinct components that border a common region.  Region
// count and sizes are preserved and asserted.
inline Dessin connect_components(const Dessin& d) {
    Dessin out = d;
    while (out.component_count > 1) {
        std::vector<int> labels;
        detail::component_count_of(out, &labels);

        // Whites on each region's boundary, with their component labels.
        struct Cand {
            int w1 = -1, w2 = -1, region = -1;
            double dist = 1e30;
        } best;
        for (const Region& r : out.regions) {
            std::set<int> ws;
            for (int w : r.walks)
                for (int h : out.walks[w]) {
                    int v = out.head_of(h);
                    if (out.vertices[v].kind == VertexKind::white) ws.insert(v);
                }
            for (int a : ws)
                for (int b : ws) {
                    if (a >= b) continue;
                    if (out.vertices[a].color != out.vertices[b].color) continue;
                    if (labels[a] == labels[b]) continue;
                    double dist = chordal(out.vertices[a].pos, out.vertices[b].pos);
                    if (dist < best.dist) best = {a, b, r.id, dist};
                }
        }
        if (best.w1 < 0)
            throw NoSameColorPair(
                "connect_components: no same-color white pair shares a region across components");

        // Sector of each vertex facing the shared region.
        auto sector_index = [&](int v, int region) {
            const auto& rot = out.rotation[v];
            for (size_t i = 0; i < rot.size(); ++i) {
                int w = out.face_of_half[rot[i]];
                if (out.region_of_walk[w] == region) return static_cast<int>(i);
            }
            throw InconsistentEmbedding("merge vertex does not border the shared region");
        };
        int i = sector_index(best.w1, best.region);
        int j = sector_index(best.w2, best.region);

        const auto rot1 = out.rotation[best.w1];
        const auto rot2 = out.rotation[best.w2];
        std::vector<int> merged;
        for (int k = 0; k <= i; ++k) merged.push_back(rot1[k]);
        int L2 = static_cast<int>(rot2.size());
        for (int k = 1; k <= L2; ++k) merged.push_back(rot2[(j + k) % L2]);
        for (int k = i + 1; k < static_cast<int>(rot1.size()); ++k) merged.push_back(rot1[k]);

        // Move w2's edges onto w1.
        for (auto& e : out.edges) {
            if (e.tail == best.w2) e.tail = best.w1;
            if (e.head == best.w2) e.head = best.w1;
        }
        out.rotation[best.w1] = merged;
        out.rotation[best.w2].clear();
        out.vertices[best.w1].multiplicity += out.vertices[best.w2].multiplicity;

        // Rebuild walks combinatorially and inherit region identity from the
        // old walks; geometry near the merged vertex is no longer meaningful.
        std::vector<int> old_region_of_half(out.face_of_half.size());
        for (size_t h = 0; h < out.face_of_half.size(); ++h)
            old_region_of_half[h] = out.region_of_walk[out.face_of_half[h]];
        std::vector<std::vector<int>> old_region_sizes;

        std::set<int> removed{best.w2};
        detail::remove_vertices(out, removed);
        detail::build_walks(out);

        std::vector<int> new_region_of_walk(out.walks.size(), -1);
        for (size_t w = 0; w < out.walks.size(); ++w) {
            int region = -1;
            for (int h : out.walks[w]) {
                int r = old_region_of_half[h];
                if (region < 0) region = r;
                if (region != r)
                    throw InconsistentEmbedding("white merge fused walks of different regions");
            }
            new_region_of_walk[w] = region;
        }
        std::vector<int> old_sizes;
        for (const Region& r : out.regions) old_sizes.push_back(r.size);
        for (Region& r : out.regions) {
            r.walks.clear();
            r.size = 0;
        }
        for (size_t w = 0; w < out.walks.size(); ++w) {
            Region& r = out.regions[new_region_of_walk[w]];
            r.walks.push_back(static_cast<int>(w));
            for (int h : out.walks[w])
                if (out.vertices[out.head_of(h)].kind == VertexKind::white) r.size++;
        }
        out.region_of_walk = new_region_of_walk;
        for (size_t r = 0; r < out.regions.size(); ++r)
            if (out.regions[r].size != old_sizes[r])
                throw InconsistentEmbedding("white merge changed a region size");

        out.component_count = detail::component_count_of(out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-parameter families, sweeps and the discriminant locus

struct Family {
    std::string param = "a";
    std::array<std::vector<Poly>, 3> coeff;  // coeff[i][k]: coefficient k of y_i as a
                                             // polynomial in the parameter
    std::vector<Complex> samples;

    TrigonalCurve at(Complex a) const {
        std::array<Poly, 3> ys;
        for (int i = 0; i < 3; ++i) {
            std::vector<Complex> cs;
            for (const Poly& ck : coeff[i]) cs.push_back(ck(a));
            ys[i] = Poly(std::move(cs));
        }
        return make_curve(ys[0], ys[1], ys[2]);
    }
};

// Cross-ratio critical points with critical value real in [0,1] flag the
// discriminant; the vertex-forced ramification never counts.  The locus is a
// real curve in the parameter plane, so grid rendering passes a tolerance on
// the order of the grid pitch.
inline bool on_discriminant(const TrigonalCurve& c, double tol = kRealJTol,
                            const SolveOptions& opt = {}) {
    for (const CriticalPoint& cp : critical_points(c, opt))
        if (cp.from_cross_ratio && j_real_in_unit_interval_closed(cp.j, tol)) return true;
    return false;
}

struct LocusSample {
    Complex a;
    bool flagged = false;
    bool degenerate = false;
};

inline std::vector<LocusSample> discriminant_locus(const Family& f,
                                                   const std::vector<Complex>& grid,
                                                   double tol = kRealJTol,
                                                   const SolveOptions& opt = {}) {
    if (grid.empty()) throw ValidationError("discriminant_locus: empty grid");
    std::vector<LocusSample> out;
    for (Complex a : grid) {
        LocusSample s;
        s.a = a;
        try {
            s.flagged = on_discriminant(f.at(a), tol, opt);
        } catch (const Error&) {
            s.degenerate = true;
        }
        out.push_back(s);
    }
    return out;
}

struct MoveEvent {
    enum class Kind {
        monochrome_modification,
        merge_black,
        merge_white,
        merge_black_monochrome,
        compound
    };
    Kind kind = Kind::compound;
    Complex a_lo, a_hi;
    std::vector<Complex> witness;  // critical point positions at the wall
    std::string note;
};

inline const char* to_string(MoveEvent::Kind k) {
    switch (k) {
        case MoveEvent::Kind::monochrome_modification: return "monochrome_modification";
        case MoveEvent::Kind::merge_black: return "merge_black";
        case MoveEvent::Kind::merge_white: return "merge_white";
        case MoveEvent::Kind::merge_black_monochrome: return "merge_black_monochrome";
        default: return "compound";
    }
}

struct SweepSample {
    Complex a;
    bool ok = false;
    std::string error;
    CombinatorialType type;
    bool simple = false;
    bool flagged = false;
    int blacks = 0, whites = 0, monos = 0, cross_vertices = 0, edge_count = 0, region_count = 0;
    int component_count = 0;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    std::vector<MoveEvent> events;
};

namespace detail_sweep {

struct Summary {
    bool ok = false;
    std::string signature;  // embedded-map class: captures every elementary move

    bool operator==(const Summary& o) const { return ok == o.ok && signature == o.signature; }
};

inline Summary summarize(const Family& f, Complex a, int resolution, const SolveOptions& opt) {
    Summary s;
    try {
        Dessin d = build_dessin(f.at(a), resolution, opt);
        s.ok = true;
        s.signature = iso_signature(d);
    } catch (const Error&) {
        s.ok = false;
    }
    return s;
}

// Classifies the wall at parameter a_star from its near-real critical values.
inline MoveEvent classify_wall(const Family& f, Complex a_lo, Complex a_hi,
                               const SolveOptions& opt) {
    MoveEvent ev;
    ev.a_lo = a_lo;
    ev.a_hi = a_hi;
    Complex a_star = 0.5 * (a_lo + a_hi);
    try {
        TrigonalCurve c = f.at(a_star);
        std::vector<CriticalPoint> wall;
        for (const CriticalPoint& cp : critical_points(c, opt))
            if (cp.from_cross_ratio && !cp.j.pole &&
                std::abs(cp.j.value.imag()) <= 1e-3 * (1.0 + std::abs(cp.j.value)) &&
                cp.j.value.real() >= -1e-3 && cp.j.value.real() <= 1.0 + 1e-3)
                wall.push_back(cp);
        if (wall.empty()) {
            ev.kind = MoveEvent::Kind::compound;
            ev.note = "no near-real critical value at the wall";
            return ev;
        }
        for (const CriticalPoint& cp : wall)
            ev.witness.push_back(cp.at_infinity ? Complex(1e300, 0.0) : cp.x);

        // Real-coefficient families hit conjugate walls simultaneously, so
        // several critical values may land on [0,1] at once; the event is
        // elementary as long as they all classify the same way.
        const double edge_tol = 1e-4;
        auto kind_of = [&](double jr) {
            if (jr > edge_tol && jr < 1.0 - edge_tol)
                return MoveEvent::Kind::monochrome_modification;
            if (jr >= 1.0 - edge_tol) return MoveEvent::Kind::merge_white;
            // Distinguish plain black merging from a monochrome vertex
            // sliding into the black vertex: the latter shows a real critical
            // value inside (0,1) on a flank.
            bool flank_mono = false;
            for (Complex a : {a_lo - (a_hi - a_lo), a_hi + (a_hi - a_lo)}) {
                try {
                    for (const CriticalPoint& cp : critical_points(f.at(a), opt))
                        if (cp.from_cross_ratio && j_real_in_unit_interval_strict(cp.j))
                            flank_mono = true;
                } catch (const Error&) {
                }
            }
            return flank_mono ? MoveEvent::Kind::merge_black_monochrome
                              : MoveEvent::Kind::merge_black;
        };
        ev.kind = kind_of(wall.front().j.value.real());
        for (size_t i = 1; i < wall.size(); ++i)
            if (kind_of(wall[i].j.value.real()) != ev.kind) {
                ev.kind = MoveEvent::Kind::compound;
                ev.note = "critical values of mixed kinds meet [0,1]";
                break;
            }
    } catch (const Error& e) {
        ev.kind = MoveEvent::Kind::compound;
        ev.note = std::string("wall curve degenerate: ") + e.what();
    }
    return ev;
}

// Cross-ratio critical values with sphere positions, for tracking walls
// between samples.
struct Track {
    Vec3 pos;
    Complex j{0.0, 0.0};
    bool pole = false;
};

inline std::vector<Track> tracks_of(const TrigonalCurve& c, const SolveOptions& opt) {
    std::vector<Track> out;
    for (const CriticalPoint& cp : critical_points(c, opt)) {
        if (!cp.from_cross_ratio) continue;
        Track t;
        t.pos = cp.at_infinity ? sphere_north() : sphere_from_complex(cp.x);
        t.pole = cp.j.pole;
        if (!cp.j.pole) t.j = cp.j.value;
        out.push_back(t);
    }
    return out;
}

// The j value of the critical point nearest to pos, at parameter a.
inline bool track_j_at(const Family& f, Complex a, const Vec3& pos, Complex& j_out,
                       const SolveOptions& opt) {
    try {
        double best = 1e9;
        bool found = false;
        for (const Track& t : tracks_of(f.at(a), opt)) {
            if (t.pole) continue;
            double d = chordal(t.pos, pos);
            if (d < best) {
                best = d;
                j_out = t.j;
                found = true;
            }
        }
        return found && best < 0.5;
    } catch (const Error&) {
        return false;
    }
}

// Detects a critical value crossing the real interval between two samples and
// returns the wall parameter.  quantity: 0 = Im j, 1 = Re j - 1, 2 = Re j.
inline bool bisect_crossing(const Family& f, Complex a0, Complex a1, const Vec3& pos,
                            int quantity, Complex& wall, const SolveOptions& opt) {
    auto value = [&](Complex a, bool& ok) {
        Complex j;
        ok = track_j_at(f, a, pos, j, opt);
        switch (quantity) {
            case 0: return j.imag();
            case 1: return j.real() - 1.0;
            default: return j.real();
        }
    };
    bool ok0 = false, ok1 = false;
    double v0 = value(a0, ok0), v1 = value(a1, ok1);
    if (!ok0 || !ok1 || (v0 > 0) == (v1 > 0)) return false;
    for (int it = 0; it < 50; ++it) {
        Complex mid = 0.5 * (a0 + a1);
        bool okm = false;
        double vm = value(mid, okm);
        if (!okm) return false;
        if ((vm > 0) == (v0 > 0)) {
            a0 = mid;
            v0 = vm;
        } else {
            a1 = mid;
        }
    }
    wall = 0.5 * (a0 + a1);
    return true;
}

}  // namespace detail_sweep

inline SweepResult sweep_family(const Family& f, int resolution = 64,
                                const SolveOptions& opt = {}) {
    if (f.samples.size() < 2)
        throw ValidationError("sweep_family: need at least two samples");
    SweepResult out;
    std::vector<detail_sweep::Summary> sums;
    for (Complex a : f.samples) {
        SweepSample s;
        s.a = a;
        detail_sweep::Summary sum;
        try {
            TrigonalCurve c = f.at(a);
            Dessin d = build_dessin(c, resolution, opt);
            s.ok = true;
            s.type = combinatorial_type(d);
            s.simple = is_simple(d);
            s.flagged = on_discriminant(c, kRealJTol, opt);
            s.blacks = d.count_kind(VertexKind::black);
            s.whites = d.count_kind(VertexKind::white);
            s.monos = d.count_kind(VertexKind::monochrome);
            s.cross_vertices = d.count_kind(VertexKind::cross);
            s.edge_count = d.merged_edge_count();
            s.region_count = static_cast<int>(d.regions.size());
            s.component_count = d.component_count;
            sum.ok = true;
            sum.signature = iso_signature(d);
        } catch (const Error& e) {
            s.ok = false;
            s.error = e.what();
        }
        out.samples.push_back(s);
        sums.push_back(sum);
    }

    for (size_t k = 0; k + 1 < f.samples.size(); ++k) {
        if (sums[k] == sums[k + 1]) continue;
        Complex lo = f.samples[k], hi = f.samples[k + 1];
        detail_sweep::Summary slo = sums[k];
        while (std::abs(hi - lo) > 1e-6) {
            Complex mid = 0.5 * (lo + hi);
            detail_sweep::Summary sm = detail_sweep::summarize(f, mid, resolution, opt);
            if (sm == slo) {
                lo = mid;
                slo = sm;
            } else {
                hi = mid;
            }
        }
        out.events.push_back(detail_sweep::classify_wall(f, lo, hi, opt));
    }

    // Second pass: track critical values and bisect genuine crossings of the
    // interval [0,1].  This catches walls whose flanking chambers happen to be
    // isomorphic, which the summary diff above cannot see.
    auto known_wall = [&](Complex a) {
        for (const MoveEvent& e : out.events)
            if (std::abs(a - 0.5 * (e.a_lo + e.a_hi)) < 1e-5) return true;
        return false;
    };
    for (size_t k = 0; k + 1 < f.samples.size(); ++k) {
        std::vector<detail_sweep::Track> t0, t1;
        try {
            t0 = detail_sweep::tracks_of(f.at(f.samples[k]), opt);
            t1 = detail_sweep::tracks_of(f.at(f.samples[k + 1]), opt);
        } catch (const Error&) {
            continue;
        }
        for (const auto& tr : t0) {
            if (tr.pole) continue;
            // nearest partner in the next sample
            const detail_sweep::Track* best = nullptr;
            double bd = 1e9;
            for (const auto& t : t1) {
                if (t.pole) continue;
                double d = chordal(tr.pos, t.pos);
                if (d < bd) {
                    bd = d;
                    best = &t;
                }
            }
            if (!best || bd > 0.5) continue;
            double re0 = tr.j.real(), re1 = best->j.real();
            double im0 = tr.j.imag(), im1 = best->j.imag();
            bool in_band = re0 > -0.2 && re0 < 1.2 && re1 > -0.2 && re1 < 1.2 &&
                           std::abs(im0) < 0.5 && std::abs(im1) < 0.5;
            if (!in_band) continue;
            // Exactly-real critical values carry +-1e-16 imaginary noise whose
            // sign flips are not crossings; tangential touches of 0/1 flip
            // only within noise as well.
            const double floor0 = 1e-12 * (1.0 + std::abs(tr.j));
            const double floor1 = 1e-12 * (1.0 + std::abs(best->j));
            int quantity = -1;
            if ((im0 > 0) != (im1 > 0) && std::abs(im0) > floor0 && std::abs(im1) > floor1)
                quantity = 0;
            else if (std::abs(im0) < 1e-6 && std::abs(im1) < 1e-6 &&
                     ((re0 - 1.0 > 0) != (re1 - 1.0 > 0)) &&
                     std::abs(re0 - 1.0) > floor0 && std::abs(re1 - 1.0) > floor1)
                quantity = 1;
            else if (std::abs(im0) < 1e-6 && std::abs(im1) < 1e-6 && ((re0 > 0) != (re1 > 0)) &&
                     std::abs(re0) > floor0 && std::abs(re1) > floor1)
                quantity = 2;
            if (quantity < 0) continue;
            Complex wall;
            if (!detail_sweep::bisect_crossing(f, f.samples[k], f.samples[k + 1], tr.pos,
                                               quantity, wall, opt))
                continue;
            // An Im crossing is a move only when it lands inside [0,1].
            if (quantity == 0) {
                Complex j;
                if (!detail_sweep::track_j_at(f, wall, tr.pos, j, opt)) continue;
                if (j.real() < -0.05 || j.real() > 1.05) continue;
            }
            if (known_wall(wall)) continue;
            Complex h(5e-7, 0.0);
            MoveEvent ev = detail_sweep::classify_wall(f, wall - h, wall + h, opt);
            // Unlike a summary diff, a bisected crossing must present an
            // actual witness at the wall to count.
            if (!ev.witness.empty()) out.events.push_back(ev);
        }
    }
    return out;
}

}  // namespace crtc
