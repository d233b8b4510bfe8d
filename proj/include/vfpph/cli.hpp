#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfpph/digraph.hpp"
#include "vfpph/distance.hpp"
#include "vfpph/error.hpp"
#include "vfpph/field.hpp"
#include "vfpph/field_io.hpp"
#include "vfpph/polygon.hpp"
#include "vfpph/pph.hpp"
#include "vfpph/singular.hpp"
#include "vfpph/svg.hpp"

namespace vfpph::cli {

enum class Command { Validate, DumpDigraph, Persistence, Locate, Polygon, Compare, Series, Gen };

struct RunConfig {
    Command command = Command::Validate;
    std::vector<std::string> inputs;
    std::string output;                     // empty: standard output
    std::optional<std::string> input_format;  // csv | json, else from extension
    std::optional<std::string> output_format; // csv | json
    std::string svg;                        // optional plot path
    double tau = kParallelTolerance;
    int digits = 17;

    // gen
    int cols = 10;
    int rows = 10;
    double eps = 1.0;
    double x0 = 0.0;
    double y0 = 0.0;
    double a = 1.0;
    double alpha = std::numbers::pi / 2;
    double rho = 1.0;
    std::optional<double> cx;
    std::optional<double> cy;

    // compare
    std::string metric = "bottleneck";
    double q = 1.0;
};

/// Default spiral center: inside a square near the middle of the grid and
/// off every grid line.
inline Vec2 default_center(const GridSpec& s) {
    return {s.x0 + s.eps * ((s.cols - 1) / 2 + 0.37), s.y0 + s.eps * ((s.rows - 1) / 2 + 0.61)};
}

namespace detail {

inline GridField load_input(const RunConfig& cfg, const std::string& path) {
    const auto fmt = cfg.input_format ? format_from_name(*cfg.input_format) : format_from_path(path);
    return load_field(path, fmt);
}

inline void require_inputs(const RunConfig& cfg, std::size_t n) {
    if (cfg.inputs.size() != n)
        throw ParamError("expected " + std::to_string(n) + " input path(s), got " + std::to_string(cfg.inputs.size()));
}

/// Writes `text` to the configured output file, or to `out` when none.
inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw IoError("cannot open '" + cfg.output + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + cfg.output + "' failed");
}

inline void write_svg(const std::string& path, const GridDigraph& dg, const SvgOptions& opt) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_digraph_svg(dg, f, opt);
}

inline bool wants_json(const RunConfig& cfg) {
    if (cfg.output_format) return format_from_name(*cfg.output_format) == FieldFormat::Json;
    return !cfg.output.empty() && cfg.output.size() >= 5 && cfg.output.substr(cfg.output.size() - 5) == ".json";
}

inline int run_gen(const RunConfig& cfg, std::ostream& out) {
    GridSpec spec{cfg.x0, cfg.y0, cfg.eps, cfg.cols, cfg.rows};
    spec.check();
    const Vec2 c = default_center(spec);
    SpiralParams params{cfg.a, cfg.alpha, cfg.rho, {cfg.cx.value_or(c.x), cfg.cy.value_or(c.y)}};
    const auto field = gen_spiral(params, spec);
    std::ostringstream text;
    write_field(field, text, wants_json(cfg) ? FieldFormat::Json : FieldFormat::Csv);
    emit(cfg, out, text.str());
    return 0;
}

inline int run_validate(const RunConfig& cfg, std::ostream& out) {
    require_inputs(cfg, 1);
    const auto report = validate_assumptions(load_input(cfg, cfg.inputs[0]), cfg.tau);
    std::ostringstream text;
    for (const auto& v : report.violations) {
        if (v.kind == Assumption::ZeroVector)
            text << "A3 zero-vector at (" << v.a.i << "," << v.a.j << ")\n";
        else
            text << "A1 " << v.detail << " neighbors (" << v.a.i << "," << v.a.j << ")-(" << v.b.i << "," << v.b.j
                 << ")\n";
    }
    text << "A4 unverifiable\n";
    text << (report.ok() ? "ok\n" : std::to_string(report.violations.size()) + " violation(s)\n");
    emit(cfg, out, text.str());
    return report.ok() ? 0 : 1;
}

inline int run_dump(const RunConfig& cfg, std::ostream& out) {
    require_inputs(cfg, 1);
    const auto dg = build_grid_digraph(load_input(cfg, cfg.inputs[0]), cfg.tau);
    emit(cfg, out, digraph_to_json(dg).dump(1) + "\n");
    if (!cfg.svg.empty()) write_svg(cfg.svg, dg, {});
    return 0;
}

/// A field file, or a digraph previously written by dump-digraph.
inline GridDigraph load_digraph_or_field(const RunConfig& cfg, const std::string& path) {
    const bool json = cfg.input_format ? format_from_name(*cfg.input_format) == FieldFormat::Json
                                       : format_from_path(path) == FieldFormat::Json;
    if (json) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open '" + path + "' for reading");
        const auto j = parse_json(in);
        if (is_digraph_json(j)) return digraph_from_json(j);
        return build_grid_digraph(field_from_json(j), cfg.tau);
    }
    return build_grid_digraph(load_input(cfg, path), cfg.tau);
}

inline int run_persistence(const RunConfig& cfg, std::ostream& out) {
    require_inputs(cfg, 1);
    const auto pd = compute_pd1(load_digraph_or_field(cfg, cfg.inputs[0]));
    std::ostringstream text;
    if (wants_json(cfg))
        text << diagram_to_json(pd).dump(1) << '\n';
    else
        write_diagram_csv(pd, text, cfg.digits);
    emit(cfg, out, text.str());
    return 0;
}

struct Pipeline {
    GridField field;
    GridDigraph dg;
    PersistenceDiagram pd;
    std::vector<SingularityReport> reports;
};

inline Pipeline locate_pipeline(const RunConfig& cfg, std::ostream& err) {
    require_inputs(cfg, 1);
    Pipeline p;
    p.field = load_input(cfg, cfg.inputs[0]);
    p.dg = build_grid_digraph(p.field, cfg.tau);
    p.pd = compute_pd1(p.dg);
    std::vector<SquareRef> saddles;
    p.reports = locate_singularities(p.field, p.dg, p.pd, &saddles, cfg.tau);
    for (auto s : saddles)
        err << "warning: index -1 square (" << s.i << "," << s.j << ") ignored; saddles are out of scope\n";
    return p;
}

inline int run_locate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto p = locate_pipeline(cfg, err);
    std::ostringstream text;
    write_reports_csv(p.reports, text, cfg.digits);
    emit(cfg, out, text.str());
    if (!cfg.svg.empty()) {
        SvgOptions opt;
        opt.marks = &p.reports;
        write_svg(cfg.svg, p.dg, opt);
    }
    return 0;
}

inline int run_polygon(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto p = locate_pipeline(cfg, err);
    nlohmann::json arr = nlohmann::json::array();
    std::vector<SingularPolygon> found;
    int status = 0;
    for (const auto& r : p.reports) {
        try {
            found.push_back(extract_singular_polygon(p.field, p.dg, p.pd, r, cfg.tau));
            arr.push_back(polygon_to_json(found.back()));
        } catch (const PolygonNotFound& e) {
            err << "error: " << e.what() << '\n';
            status = 1;
        }
    }
    emit(cfg, out, arr.dump(1) + "\n");
    if (!cfg.svg.empty()) {
        SvgOptions opt;
        EdgeMask reduced;
        if (!found.empty()) {
            reduced = reduce_digraph(p.dg, threshold_mask(p.dg, found.front().birth_weight)).retained;
            opt.edges = &reduced;
            opt.polygon = &found.front();
        }
        opt.marks = &p.reports;
        write_svg(cfg.svg, p.dg, opt);
    }
    return status;
}

inline DiagramDistanceResult diagram_distance(const RunConfig& cfg, const PersistenceDiagram& a,
                                              const PersistenceDiagram& b) {
    if (cfg.metric == "bottleneck") return bottleneck_distance(a, b);
    if (cfg.metric == "wasserstein") return wasserstein_distance(a, b, cfg.q);
    throw ParamError("unknown metric '" + cfg.metric + "'");
}

inline int run_compare(const RunConfig& cfg, std::ostream& out) {
    require_inputs(cfg, 2);
    const auto f1 = load_input(cfg, cfg.inputs[0]);
    const auto f2 = load_input(cfg, cfg.inputs[1]);
    if (!(f1.spec == f2.spec)) throw SpecMismatch("compared fields must share one grid");
    const auto d = diagram_distance(cfg, compute_pd1(build_grid_digraph(f1, cfg.tau)),
                                    compute_pd1(build_grid_digraph(f2, cfg.tau)));
    emit(cfg, out, format_real(d.value, cfg.digits) + "\n");
    return 0;
}

/// Manifest: one field path per line; relative paths resolve against the
/// manifest's directory. Blank lines and `#` comments are skipped.
inline std::vector<std::string> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = io_detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::filesystem::path p{std::string(t)};
        out.push_back((p.is_absolute() ? p : base / p).string());
    }
    return out;
}

inline int run_series(const RunConfig& cfg, std::ostream& out) {
    require_inputs(cfg, 1);
    std::vector<GridField> fields;
    for (const auto& path : read_manifest(cfg.inputs[0])) fields.push_back(load_input(cfg, path));
    std::ostringstream text;
    text << "step,bottleneck\n";
    for (auto [step, value] : distance_series(fields, cfg.tau)) text << step << ',' << format_real(value, cfg.digits) << '\n';
    emit(cfg, out, text.str());
    return 0;
}

} // namespace detail

/// Runs one command. Exit status: 0 success, 1 domain error, 2 input error.
inline int run(RunConfig cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    if (const char* env = std::getenv("VFPPH_PRECISION")) {
        const int d = std::atoi(env);
        if (d >= 1 && d <= 17) cfg.digits = d;
    }
    try {
        switch (cfg.command) {
        case Command::Gen: return detail::run_gen(cfg, out);
        case Command::Validate: return detail::run_validate(cfg, out);
        case Command::DumpDigraph: return detail::run_dump(cfg, out);
        case Command::Persistence: return detail::run_persistence(cfg, out);
        case Command::Locate: return detail::run_locate(cfg, out, err);
        case Command::Polygon: return detail::run_polygon(cfg, out, err);
        case Command::Compare: return detail::run_compare(cfg, out);
        case Command::Series: return detail::run_series(cfg, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_input_error() ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace vfpph::cli
