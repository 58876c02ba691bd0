// Command-line frontend: computes dessins d'enfants of completely reducible
// trigonal curves, enumerates combinatorial data, sweeps deformation families
// and renders figures.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "crtc/report.hpp"
#include "crtc/svg.hpp"

namespace {

using namespace crtc;

std::string read_input(const std::string& path) {
    if (path == "-" || path.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::cout << data;
        if (!data.empty() && data.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << data;
}

std::string svg_sibling(const std::string& out_path) {
    if (out_path.empty()) return {};
    auto dot = out_path.find_last_of('.');
    if (dot == std::string::npos) return out_path + ".svg";
    return out_path.substr(0, dot) + ".svg";
}

struct CommonOpts {
    std::string input = "-";
    std::string out;
    int resolution = 100;
    double tolerance = 1e-12;
    unsigned seed = 0;
    bool svg = false;
    bool suppress_bivalent = false;

    SolveOptions solve() const { return SolveOptions{tolerance, 500, seed}; }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("spec", o.input, "curve spec file (JSON), or - for stdin");
    cmd->add_option("--resolution", o.resolution, "level-set samples over [0,1]")
        ->default_val(100);
    cmd->add_option("--out", o.out, "write the report here instead of stdout");
    cmd->add_option("--tolerance", o.tolerance, "root-finder residual target")
        ->default_val(1e-12);
    cmd->add_option("--seed", o.seed, "root-finder start perturbation")->default_val(0);
}

int run(int argc, char** argv) {
    CLI::App app{"dessins d'enfants of completely reducible trigonal curves"};
    app.require_subcommand(1);

    CommonOpts dessin_opts;
    auto* cmd_dessin = app.add_subcommand("dessin", "compute a dessin and its report");
    add_common(cmd_dessin, dessin_opts);
    cmd_dessin->add_flag("--svg", dessin_opts.svg, "also write an SVG next to --out");
    cmd_dessin->add_flag("--suppress-bivalent", dessin_opts.suppress_bivalent,
                         "omit bivalent white vertices from the drawing");

    std::string enum_mode;
    int enum_n = 1;
    std::string enum_out;
    auto* cmd_enum = app.add_subcommand("enumerate", "combinatorial catalogs and counts");
    cmd_enum->add_option("mode", enum_mode, "bound | pretypes | simple-count")->required();
    cmd_enum->add_option("n", enum_n, "maximal degree")->required();
    cmd_enum->add_option("--out", enum_out, "write the table here instead of stdout");

    CommonOpts deform_opts;
    double band = 0.02;
    auto* cmd_deform = app.add_subcommand("deform", "sweep a family and sample the locus");
    add_common(cmd_deform, deform_opts);
    cmd_deform->add_flag("--svg", deform_opts.svg, "also write the locus SVG next to --out");
    cmd_deform->add_option("--band", band, "locus flagging tolerance")->default_val(0.02);

    CommonOpts render_opts;
    auto* cmd_render = app.add_subcommand("render", "emit only the SVG figure");
    add_common(cmd_render, render_opts);
    cmd_render->add_flag("--suppress-bivalent", render_opts.suppress_bivalent,
                         "omit bivalent white vertices from the drawing");

    CLI11_PARSE(app, argc, argv);

    if (cmd_dessin->parsed()) {
        CurveSpec spec = parse_spec(read_input(dessin_opts.input));
        if (!spec.has_curve) throw ValidationError("dessin: the spec has no curve");
        TrigonalCurve c = make_curve(spec.ys[0], spec.ys[1], spec.ys[2]);
        Dessin d = build_dessin(c, dessin_opts.resolution, dessin_opts.solve());
        write_output(dessin_opts.out, dessin_report(d).dump(2));
        if (dessin_opts.svg) {
            RenderStyle style;
            style.suppress_bivalent = dessin_opts.suppress_bivalent;
            std::string path = svg_sibling(dessin_opts.out);
            if (path.empty()) throw ValidationError("--svg needs --out to name the file");
            write_output(path, render_svg(d, style));
        }
    } else if (cmd_enum->parsed()) {
        write_output(enum_out, enumerate_report(enum_n, enum_mode).dump(2));
    } else if (cmd_deform->parsed()) {
        CurveSpec spec = parse_spec(read_input(deform_opts.input));
        Json rep = deform_report(spec, deform_opts.resolution, band, deform_opts.solve());
        write_output(deform_opts.out, rep.dump(2));
        if (deform_opts.svg) {
            std::string path = svg_sibling(deform_opts.out);
            if (path.empty()) throw ValidationError("--svg needs --out to name the file");
            auto locus = discriminant_locus(spec.family, spec.grid, band, deform_opts.solve());
            write_output(path, render_locus_svg(locus));
        }
    } else if (cmd_render->parsed()) {
        CurveSpec spec = parse_spec(read_input(render_opts.input));
        if (!spec.has_curve) throw ValidationError("render: the spec has no curve");
        TrigonalCurve c = make_curve(spec.ys[0], spec.ys[1], spec.ys[2]);
        Dessin d = build_dessin(c, render_opts.resolution, render_opts.solve());
        RenderStyle style;
        style.suppress_bivalent = render_opts.suppress_bivalent;
        write_output(render_opts.out, render_svg(d, style));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const crtc::Error& e) {
        std::cout << crtc::error_json(e).dump(2) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cout << crtc::Json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        return 1;
    }
}
