#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vfpph/digraph.hpp"
#include "vfpph/field.hpp"
#include "vfpph/pph.hpp"

namespace vfpph {

struct SingularityReport {
    SquareRef square;
    int index = 1;
    Vec2 center;
    double trigger_weight = 0.0;
    std::array<double, 4> edge_weights{}; // bottom, right, top, left
};

/// Winding number of the field along a closed vertex loop (last vertex
/// connects back to the first), summing signed rotation angles between
/// consecutive samples. The loop should run counterclockwise.
inline int loop_winding_number(const GridField& field, std::span<const GridPoint> loop,
                               double tau = kParallelTolerance) {
    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const auto a = loop[k];
        const auto b = loop[(k + 1) % loop.size()];
        total += rotation_angle(field.at(a), field.at(b), tau);
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 0.25)
        throw DegenerateAngle("winding sum " + std::to_string(turns) + " turns is not near an integer");
    return static_cast<int>(rounded);
}

inline std::array<GridPoint, 4> square_corners(SquareRef s) {
    return {GridPoint{s.i, s.j}, GridPoint{s.i + 1, s.j}, GridPoint{s.i + 1, s.j + 1}, GridPoint{s.i, s.j + 1}};
}

/// Index of a unit square, corners visited counterclockwise from lower-left.
inline int winding_number(const GridField& field, SquareRef s, double tau = kParallelTolerance) {
    const auto corners = square_corners(s);
    return loop_winding_number(field, corners, tau);
}

/// Average of the four edge midpoints weighted by edge weight.
inline Vec2 weighted_center(const GridDigraph& dg, SquareRef s) {
    const auto& spec = dg.spec;
    const auto e = dg.square_edges(s);
    const Vec2 ll = spec.coord(s.i, s.j);
    const double h = spec.eps / 2;
    const std::array<Vec2, 4> mid{Vec2{ll.x + h, ll.y}, Vec2{ll.x + spec.eps, ll.y + h},
                                  Vec2{ll.x + h, ll.y + spec.eps}, Vec2{ll.x, ll.y + h}};
    double w = 0.0;
    Vec2 acc;
    for (int k = 0; k < 4; ++k) {
        const double wk = dg.weight(e[k]);
        acc.x += wk * mid[k].x;
        acc.y += wk * mid[k].y;
        w += wk;
    }
    return {acc.x / w, acc.y / w};
}

/// Finds index +1 squares adjacent to the edges that create the classes
/// that never die, in order of their creation weight.
///
/// Index -1 squares met along the way are written to `saddles` when given;
/// they are never reported as singularities.
inline std::vector<SingularityReport> locate_singularities(const GridField& field, const GridDigraph& dg,
                                                           const PersistenceDiagram& pd,
                                                           std::vector<SquareRef>* saddles = nullptr,
                                                           double tau = kParallelTolerance) {
    auto births = pd.infinite_births();
    births.erase(std::unique(births.begin(), births.end()), births.end());

    std::vector<EdgeSlot> by_weight(dg.num_edges());
    for (EdgeSlot s = 0; s < by_weight.size(); ++s) by_weight[s] = s;
    std::stable_sort(by_weight.begin(), by_weight.end(),
                     [&](EdgeSlot a, EdgeSlot b) { return dg.weight(a) < dg.weight(b); });

    std::vector<SingularityReport> reports;
    std::set<SquareRef> visited;
    for (double a : births) {
        auto lo = std::lower_bound(by_weight.begin(), by_weight.end(), a,
                                   [&](EdgeSlot s, double w) { return dg.weight(s) < w; });
        for (auto it = lo; it != by_weight.end() && dg.weight(*it) == a; ++it) {
            for (const auto& sq : dg.adjacent_squares(*it)) {
                if (!visited.insert(sq).second) continue;
                const int index = winding_number(field, sq, tau);
                if (index == -1 && saddles) saddles->push_back(sq);
                if (index != 1) continue;
                SingularityReport r;
                r.square = sq;
                r.index = index;
                r.center = weighted_center(dg, sq);
                r.trigger_weight = a;
                const auto e = dg.square_edges(sq);
                for (int k = 0; k < 4; ++k) r.edge_weights[k] = dg.weight(e[k]);
                reports.push_back(r);
            }
        }
    }
    return reports;
}

inline void write_reports_csv(const std::vector<SingularityReport>& reports, std::ostream& out, int digits = 17) {
    out << "square_i,square_j,index,center_x,center_y,trigger_weight\n";
    for (const auto& r : reports)
        out << r.square.i << ',' << r.square.j << ',' << r.index << ',' << format_real(r.center.x, digits) << ','
            << format_real(r.center.y, digits) << ',' << format_real(r.trigger_weight, digits) << '\n';
}

} // namespace vfpph
