#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "crtc/analysis.hpp"
#include "crtc/combinatorics.hpp"
#include "crtc/dessin.hpp"
#include "crtc/errors.hpp"

namespace crtc {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Curve / family specs.  Complex numbers encode as [re, im]; polynomial
// coefficients ascend by power.

struct CurveSpec {
    bool has_curve = false;
    std::array<Poly, 3> ys;

    bool has_family = false;
    Family family;                  // samples filled from the grid block
    std::vector<Complex> grid;      // complex grid for locus rendering
    bool grid_is_line = false;      // true: samples along a real interval
};

namespace detail_spec {

inline Complex parse_complex(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("expected [re, im] at " + path);
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Poly parse_poly(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError("expected a coefficient list at " + path);
    std::vector<Complex> c;
    for (size_t i = 0; i < j.size(); ++i)
        c.push_back(parse_complex(j[i], path + "[" + std::to_string(i) + "]"));
    return Poly(std::move(c));
}

inline std::vector<Poly> parse_poly_list(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError("expected a coefficient-polynomial list at " + path);
    std::vector<Poly> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_poly(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace detail_spec

inline CurveSpec parse_spec(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top-level value must be an object");

    CurveSpec spec;
    if (j.contains("family")) {
        const Json& f = j["family"];
        if (!f.is_object()) throw ParseError("expected an object at family");
        spec.has_family = true;
        spec.family.param = f.value("param", "a");
        for (int i = 0; i < 3; ++i) {
            std::string key = "y" + std::to_string(i + 1);
            if (!f.contains(key)) throw ParseError("missing field at family." + key);
            spec.family.coeff[i] = detail_spec::parse_poly_list(f[key], "family." + key);
        }
        if (!f.contains("grid")) throw ParseError("missing field at family.grid");
        const Json& g = f["grid"];
        if (g.contains("range")) {
            auto lohi = g["range"];
            if (!lohi.is_array() || lohi.size() != 2)
                throw ParseError("expected [lo, hi] at family.grid.range");
            double lo = lohi[0].get<double>(), hi = lohi[1].get<double>();
            int count = g.value("count", 100);
            if (count < 2) throw ParseError("family.grid.count must be at least 2");
            for (int i = 0; i < count; ++i)
                spec.family.samples.push_back(Complex(lo + (hi - lo) * i / (count - 1), 0.0));
            spec.grid = spec.family.samples;
            spec.grid_is_line = true;
        } else if (g.contains("re") && g.contains("im")) {
            auto re = g["re"], im = g["im"];
            int nx = g.value("nx", 41), ny = g.value("ny", 41);
            if (nx < 2 || ny < 2) throw ParseError("family.grid.nx/ny must be at least 2");
            double rlo = re[0].get<double>(), rhi = re[1].get<double>();
            double ilo = im[0].get<double>(), ihi = im[1].get<double>();
            for (int i = 0; i < nx; ++i)
                for (int k = 0; k < ny; ++k)
                    spec.grid.push_back(
                        {rlo + (rhi - rlo) * i / (nx - 1), ilo + (ihi - ilo) * k / (ny - 1)});
            spec.family.samples = spec.grid;
        } else {
            throw ParseError("family.grid needs either range or re/im bounds");
        }
        return spec;
    }

    for (int i = 0; i < 3; ++i) {
        std::string key = "y" + std::to_string(i + 1);
        if (!j.contains(key)) throw ParseError("missing field at " + key);
        spec.ys[i] = detail_spec::parse_poly(j[key], key);
    }
    spec.has_curve = true;
    return spec;
}

// ---------------------------------------------------------------------------
// Reports

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vertex_json(const DessinVertex& v) {
    Json o;
    o["id"] = v.id;
    o["kind"] = to_string(v.kind);
    switch (v.kind) {
        case VertexKind::black: o["color"] = to_string(static_cast<BlackColor>(v.color)); break;
        case VertexKind::white: o["color"] = to_string(static_cast<WhiteColor>(v.color)); break;
        case VertexKind::cross: o["pair"] = to_string(static_cast<CrossPair>(v.color)); break;
        case VertexKind::monochrome: o["jvalue"] = v.jvalue; break;
    }
    o["at_infinity"] = v.at_infinity;
    o["plane"] = v.at_infinity ? Json(nullptr) : complex_json(v.plane);
    o["sphere"] = Json::array({v.pos.x, v.pos.y, v.pos.z});
    o["multiplicity"] = v.multiplicity;
    o["degree"] = v.degree;
    return o;
}

inline Json dessin_report(const Dessin& d) {
    Json o;
    o["n"] = d.n;
    o["maximal_degree"] = d.max_degree;
    o["resolution"] = d.resolution;
    o["component_count"] = d.component_count;
    o["edge_count"] = d.merged_edge_count();

    Json vs = Json::array();
    for (const auto& v : d.vertices) vs.push_back(vertex_json(v));
    o["vertices"] = vs;

    Json es = Json::array();
    for (const auto& e : d.edges) {
        Json eo;
        eo["id"] = e.id;
        eo["tail"] = e.tail;
        eo["head"] = e.head;
        const Arc& arc = gamma_arcs()[e.family];
        eo["family"] = std::string(to_string(arc.black)) + "-" + to_string(arc.white);
        Json strand = Json::array();
        for (const Vec3& p : e.strand) strand.push_back(Json::array({p.x, p.y, p.z}));
        eo["strand"] = strand;
        es.push_back(eo);
    }
    o["edges"] = es;

    Json rs = Json::array();
    for (const auto& r : d.regions) {
        Json ro;
        ro["id"] = r.id;
        ro["pair"] = to_string(r.pair);
        ro["size"] = r.size;
        ro["crosses"] = r.crosses;
        ro["cross_multiplicity"] = r.cross_multiplicity;
        rs.push_back(ro);
    }
    o["regions"] = rs;

    o["combinatorial_type"] = combinatorial_type(d).sizes;
    o["is_simple"] = is_simple(d);

    MaximalityResult m = is_maximal(d);
    o["maximal"] = Json{{"value", m.value}, {"reasons", m.reasons}};

    StructuralReport rep = structural_report(d);
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    o["structural_report"] = Json{{"pass", rep.all_pass}, {"checks", checks}};
    return o;
}

inline Json enumerate_report(int n, const std::string& mode) {
    Json o;
    o["n"] = n;
    o["mode"] = mode;
    if (mode == "bound") {
        std::int64_t formula = bound_formula(n);
        std::int64_t oracle = static_cast<std::int64_t>(enumerate_pretypes(n).merged.size());
        o["formula"] = formula;
        o["oracle"] = oracle;
        o["agree"] = (formula == oracle);
    } else if (mode == "pretypes") {
        PreTypeCatalog cat = enumerate_pretypes(n);
        auto bad = known_nonrealizable(n);
        Json rows = Json::array();
        for (const auto& t : cat.merged) {
            Json row;
            row["type"] = t;
            bool nonreal = false;
            for (const auto& b : bad)
                if (b == t) nonreal = true;
            row["realizable"] = nonreal ? "no" : (n <= 4 ? "yes" : "unknown");
            rows.push_back(row);
        }
        o["count"] = cat.merged.size();
        o["types"] = rows;
    } else if (mode == "simple-count") {
        std::int64_t count = count_simple(n);
        double asym = simple_asymptotic(n);
        o["count"] = count;
        o["asymptotic"] = asym;
        o["ratio"] = static_cast<double>(count) / asym;
    } else {
        throw ValidationError("enumerate: unknown mode '" + mode + "'");
    }
    return o;
}

inline Json sweep_sample_json(const SweepSample& s) {
    Json o;
    o["a"] = complex_json(s.a);
    o["ok"] = s.ok;
    if (!s.ok) {
        o["error"] = s.error;
        return o;
    }
    o["type"] = s.type.sizes;
    o["simple"] = s.simple;
    o["flagged"] = s.flagged;
    o["blacks"] = s.blacks;
    o["whites"] = s.whites;
    o["monochromes"] = s.monos;
    o["edges"] = s.edge_count;
    o["regions"] = s.region_count;
    o["components"] = s.component_count;
    return o;
}

inline Json deform_report(const CurveSpec& spec, int resolution, double band,
                          const SolveOptions& opt = {}) {
    if (!spec.has_family) throw ValidationError("deform: the spec has no family block");
    Json o;
    o["param"] = spec.family.param;

    auto locus = discriminant_locus(spec.family, spec.grid, band, opt);
    Json lj = Json::array();
    int flagged = 0;
    for (const auto& s : locus) {
        if (!s.flagged || s.degenerate) continue;
        ++flagged;
        lj.push_back(complex_json(s.a));
    }
    o["locus"] = lj;
    o["locus_flagged"] = flagged;
    o["locus_total"] = locus.size();

    if (spec.grid_is_line) {
        SweepResult sw = sweep_family(spec.family, resolution, opt);
        Json samples = Json::array();
        for (const auto& s : sw.samples) samples.push_back(sweep_sample_json(s));
        o["samples"] = samples;
        Json events = Json::array();
        for (const auto& e : sw.events) {
            Json eo;
            eo["kind"] = to_string(e.kind);
            eo["window"] = Json::array({complex_json(e.a_lo), complex_json(e.a_hi)});
            Json w = Json::array();
            for (Complex x : e.witness) w.push_back(complex_json(x));
            eo["witness"] = w;
            if (!e.note.empty()) eo["note"] = e.note;
            events.push_back(eo);
        }
        o["events"] = events;
    }
    return o;
}

inline Json error_json(const Error& e) {
    return Json{{"error", Json{{"code", e.code()}, {"message", e.what()}}}};
}

}  // namespace crtc
