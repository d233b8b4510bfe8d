#pragma once

#include <ostream>
#include <vector>

#include "vfpph/digraph.hpp"
#include "vfpph/field_io.hpp"
#include "vfpph/polygon.hpp"

namespace vfpph {

struct SvgOptions {
    double cell = 40.0;   // pixels per grid step
    double margin = 20.0; // pixels
    const EdgeMask* edges = nullptr;              // draw only these slots if set
    const SingularPolygon* polygon = nullptr;     // filled underneath the arcs
    const std::vector<SingularityReport>* marks = nullptr;
};

/// Grid digraph as SVG: one arrow per arc, optional polygon fill and
/// singularity markers.
inline void write_digraph_svg(const GridDigraph& dg, std::ostream& out, const SvgOptions& opt = {}) {
    const auto& spec = dg.spec;
    const double width = 2 * opt.margin + (spec.cols - 1) * opt.cell;
    const double height = 2 * opt.margin + (spec.rows - 1) * opt.cell;
    auto px = [&](double i) { return opt.margin + i * opt.cell; };
    auto py = [&](double j) { return height - opt.margin - j * opt.cell; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
        << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
           "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333\"/></marker></defs>\n";

    if (opt.polygon && !opt.polygon->loop.empty()) {
        out << "<polygon fill=\"#f7b6d2\" stroke=\"#d6276b\" stroke-width=\"2\" points=\"";
        for (auto p : opt.polygon->loop) out << px(p.i) << ',' << py(p.j) << ' ';
        out << "\"/>\n";
    }

    const double inset = 0.15;
    for (EdgeSlot s = 0; s < dg.num_edges(); ++s) {
        if (opt.edges && !(*opt.edges)[s]) continue;
        auto [t, h] = dg.arc(s);
        const double x1 = t.i + inset * (h.i - t.i);
        const double y1 = t.j + inset * (h.j - t.j);
        const double x2 = h.i - inset * (h.i - t.i);
        const double y2 = h.j - inset * (h.j - t.j);
        out << "<line x1=\"" << px(x1) << "\" y1=\"" << py(y1) << "\" x2=\"" << px(x2) << "\" y2=\"" << py(y2)
            << "\" stroke=\"#333\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"><title>w="
            << format_real(dg.weight(s), 6) << "</title></line>\n";
    }
    for (int j = 0; j < spec.rows; ++j)
        for (int i = 0; i < spec.cols; ++i)
            out << "<circle cx=\"" << px(i) << "\" cy=\"" << py(j) << "\" r=\"2\" fill=\"#000\"/>\n";
    if (opt.marks)
        for (const auto& r : *opt.marks) {
            const double ci = (r.center.x - spec.x0) / spec.eps;
            const double cj = (r.center.y - spec.y0) / spec.eps;
            out << "<circle cx=\"" << px(ci) << "\" cy=\"" << py(cj) << "\" r=\"4\" fill=\"#d62728\"/>\n";
        }
    out << "</svg>\n";
}

} // namespace vfpph
