#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfpph/digraph.hpp"
#include "vfpph/field.hpp"
#include "vfpph/pph.hpp"
#include "vfpph/singular.hpp"

namespace vfpph {

/// Membership mask over the edge slots of a grid digraph.
using EdgeMask = std::vector<bool>;

inline EdgeMask threshold_mask(const GridDigraph& dg, double w) {
    EdgeMask m(dg.num_edges());
    for (EdgeSlot s = 0; s < m.size(); ++s) m[s] = dg.weight(s) <= w;
    return m;
}

inline std::vector<EdgeSlot> mask_slots(const EdgeMask& m) {
    std::vector<EdgeSlot> out;
    for (EdgeSlot s = 0; s < m.size(); ++s)
        if (m[s]) out.push_back(s);
    return out;
}

/// Up to four slots touching a grid point.
inline std::vector<EdgeSlot> incident_slots(const GridDigraph& dg, GridPoint p) {
    std::vector<EdgeSlot> out;
    if (p.i > 0) out.push_back(dg.horizontal_slot(p.i - 1, p.j));
    if (p.i + 1 < dg.spec.cols) out.push_back(dg.horizontal_slot(p.i, p.j));
    if (p.j > 0) out.push_back(dg.vertical_slot(p.i, p.j - 1));
    if (p.j + 1 < dg.spec.rows) out.push_back(dg.vertical_slot(p.i, p.j));
    return out;
}

struct ReducedDigraph {
    EdgeMask retained;

    std::vector<EdgeSlot> slots() const { return mask_slots(retained); }
};

/// Peels edges hanging off degree-1 vertices until none remain. The result
/// is the largest subgraph without isolated edges, so it does not depend on
/// the peeling order.
inline ReducedDigraph reduce_digraph(const GridDigraph& dg, EdgeMask edges) {
    const auto& spec = dg.spec;
    std::vector<int> degree(spec.num_points(), 0);
    for (EdgeSlot s = 0; s < edges.size(); ++s) {
        if (!edges[s]) continue;
        auto [a, b] = dg.endpoints(s);
        ++degree[spec.index(a)];
        ++degree[spec.index(b)];
    }
    std::deque<GridPoint> pending;
    for (int j = 0; j < spec.rows; ++j)
        for (int i = 0; i < spec.cols; ++i)
            if (degree[spec.index(i, j)] == 1) pending.push_back({i, j});
    while (!pending.empty()) {
        const GridPoint p = pending.front();
        pending.pop_front();
        if (degree[spec.index(p)] != 1) continue;
        for (auto s : incident_slots(dg, p)) {
            if (!edges[s]) continue;
            edges[s] = false;
            auto [a, b] = dg.endpoints(s);
            const GridPoint other = (a == p) ? b : a;
            --degree[spec.index(p)];
            if (--degree[spec.index(other)] == 1) pending.push_back(other);
            break;
        }
    }
    return {std::move(edges)};
}

/// A bounded face: the unit squares it covers and the counterclockwise
/// vertex cycle around it (holes filled in).
struct Face {
    std::vector<SquareRef> squares;
    std::vector<GridPoint> boundary;
    std::size_t enclosed = 0; // squares inside `boundary`, holes included
};

namespace polygon_detail {

// Square grid padded by one ring of exterior cells: cell (i, j) of the
// padded grid is square (i - 1, j - 1).
struct PaddedCells {
    int w;
    int h;
    std::size_t at(int i, int j) const { return static_cast<std::size_t>(j + 1) * w + (i + 1); }
};

struct FilledRegion {
    std::vector<GridPoint> boundary;
    std::size_t area = 0;
};

/// Boundary of a square set after filling its holes, as a counterclockwise
/// vertex cycle starting at the smallest (i, j) vertex.
inline FilledRegion filled_boundary(const GridSpec& spec, const std::vector<SquareRef>& squares) {
    const PaddedCells cells{spec.cols + 1, spec.rows + 1};
    std::vector<char> inside(static_cast<std::size_t>(cells.w) * cells.h, 0);
    for (auto q : squares) inside[cells.at(q.i, q.j)] = 1;

    // Everything reachable from the exterior without entering the region.
    std::vector<char> outside(inside.size(), 0);
    std::deque<std::pair<int, int>> queue{{-1, -1}};
    outside[cells.at(-1, -1)] = 1;
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ni = i + di[k];
            const int nj = j + dj[k];
            if (ni < -1 || nj < -1 || ni >= spec.cols || nj >= spec.rows) continue;
            const auto idx = cells.at(ni, nj);
            if (inside[idx] || outside[idx]) continue;
            outside[idx] = 1;
            queue.push_back({ni, nj});
        }
    }
    auto filled = [&](int i, int j) { return !outside[cells.at(i, j)]; };

    // Directed boundary edges with the filled region on their left.
    std::map<GridPoint, GridPoint> next;
    auto link = [&](GridPoint a, GridPoint b) {
        if (!next.emplace(a, b).second) throw std::logic_error("filled region boundary is not a simple cycle");
    };
    for (int j = 0; j + 1 < spec.rows; ++j)
        for (int i = 0; i + 1 < spec.cols; ++i) {
            if (!filled(i, j)) continue;
            if (!filled(i, j - 1)) link({i, j}, {i + 1, j});
            if (!filled(i + 1, j)) link({i + 1, j}, {i + 1, j + 1});
            if (!filled(i, j + 1)) link({i + 1, j + 1}, {i, j + 1});
            if (!filled(i - 1, j)) link({i, j + 1}, {i, j});
        }
    FilledRegion region;
    for (int j = 0; j + 1 < spec.rows; ++j)
        for (int i = 0; i + 1 < spec.cols; ++i) region.area += filled(i, j) ? 1 : 0;
    if (next.empty()) return region;
    auto& loop = region.boundary;
    const GridPoint start = next.begin()->first;
    GridPoint p = start;
    do {
        loop.push_back(p);
        p = next.at(p);
    } while (!(p == start) && loop.size() <= next.size());
    if (loop.size() != next.size()) throw std::logic_error("filled region boundary is not a single cycle");
    return region;
}

} // namespace polygon_detail

/// The face of the subgraph `edges` that contains square `s`, or nothing if
/// that face is unbounded. Squares join a face across absent edges.
inline std::optional<Face> face_containing(const GridDigraph& dg, const EdgeMask& edges, SquareRef s) {
    std::vector<char> seen(dg.num_squares(), 0);
    const int sw = dg.spec.cols - 1;
    auto id = [&](SquareRef q) { return static_cast<std::size_t>(q.j) * sw + q.i; };
    Face face;
    bool bounded = true;
    std::deque<SquareRef> queue{s};
    seen[id(s)] = 1;
    while (!queue.empty()) {
        const SquareRef q = queue.front();
        queue.pop_front();
        face.squares.push_back(q);
        const auto e = dg.square_edges(q);
        const SquareRef across[4] = {{q.i, q.j - 1}, {q.i + 1, q.j}, {q.i, q.j + 1}, {q.i - 1, q.j}};
        for (int k = 0; k < 4; ++k) {
            if (edges[e[k]]) continue;
            const SquareRef n = across[k];
            if (!dg.contains(n)) {
                bounded = false;
                continue;
            }
            if (seen[id(n)]) continue;
            seen[id(n)] = 1;
            queue.push_back(n);
        }
    }
    if (!bounded) return std::nullopt;
    std::sort(face.squares.begin(), face.squares.end());
    auto region = polygon_detail::filled_boundary(dg.spec, face.squares);
    face.boundary = std::move(region.boundary);
    face.enclosed = region.area;
    return face;
}

/// All bounded faces of the planar subgraph `edges`.
inline std::vector<Face> faces_of_subgraph(const GridDigraph& dg, const EdgeMask& edges) {
    std::vector<char> assigned(dg.num_squares(), 0);
    const int sw = dg.spec.cols - 1;
    std::vector<Face> faces;
    for (int j = 0; j + 1 < dg.spec.rows; ++j)
        for (int i = 0; i < sw; ++i) {
            if (assigned[static_cast<std::size_t>(j) * sw + i]) continue;
            auto face = face_containing(dg, edges, {i, j});
            if (face) {
                for (auto q : face->squares) assigned[static_cast<std::size_t>(q.j) * sw + q.i] = 1;
                faces.push_back(std::move(*face));
                continue;
            }
            std::deque<SquareRef> queue{{i, j}};
            assigned[static_cast<std::size_t>(j) * sw + i] = 1;
            while (!queue.empty()) {
                const SquareRef q = queue.front();
                queue.pop_front();
                const auto e = dg.square_edges(q);
                const SquareRef across[4] = {{q.i, q.j - 1}, {q.i + 1, q.j}, {q.i, q.j + 1}, {q.i - 1, q.j}};
                for (int k = 0; k < 4; ++k) {
                    if (edges[e[k]] || !dg.contains(across[k])) continue;
                    auto& a = assigned[static_cast<std::size_t>(across[k].j) * sw + across[k].i];
                    if (a) continue;
                    a = 1;
                    queue.push_back(across[k]);
                }
            }
        }
    return faces;
}

struct SingularPolygon {
    std::vector<GridPoint> loop; // counterclockwise, closing edge implicit
    double birth_weight = 0.0;
    SquareRef enclosed_square;
    int index = 1;
    std::size_t enclosed_squares = 0;
};

/// Earliest minimal polygon of index +1 around a reported singular square.
///
/// Walks the weights of the never-dying classes upward; at each one the
/// threshold subgraph is reduced and the face holding the singular square
/// is looked up. The outer boundary of that face is the smallest cycle of
/// the subgraph enclosing the square; it qualifies once its winding number
/// is +1.
inline SingularPolygon extract_singular_polygon(const GridField& field, const GridDigraph& dg,
                                                const PersistenceDiagram& pd, const SingularityReport& report,
                                                double tau = kParallelTolerance) {
    if (!dg.contains(report.square)) throw PolygonNotFound("reported square lies outside the grid");
    auto births = pd.infinite_births();
    births.erase(std::unique(births.begin(), births.end()), births.end());
    for (double w : births) {
        const auto reduced = reduce_digraph(dg, threshold_mask(dg, w));
        auto face = face_containing(dg, reduced.retained, report.square);
        if (!face) continue;
        if (loop_winding_number(field, face->boundary, tau) != 1) continue;
        SingularPolygon poly;
        poly.loop = std::move(face->boundary);
        poly.birth_weight = w;
        poly.enclosed_square = report.square;
        poly.index = 1;
        poly.enclosed_squares = face->enclosed;
        return poly;
    }
    throw PolygonNotFound("no index +1 polygon encloses square (" + std::to_string(report.square.i) + ", " +
                          std::to_string(report.square.j) + ")");
}

inline nlohmann::json polygon_to_json(const SingularPolygon& p) {
    nlohmann::json loop = nlohmann::json::array();
    for (auto v : p.loop) loop.push_back({v.i, v.j});
    return {{"loop", std::move(loop)},
            {"birth_weight", p.birth_weight},
            {"enclosed_square", {p.enclosed_square.i, p.enclosed_square.j}}};
}

} // namespace vfpph
