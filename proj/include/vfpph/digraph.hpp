#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vfpph/error.hpp"
#include "vfpph/field.hpp"
#include "vfpph/field_io.hpp"

namespace vfpph {

/// Signed rotation angle from v1 to v2, counterclockwise positive.
///
/// Throws DegenerateAngle when either vector is zero or the pair is parallel
/// or anti-parallel within `tau`, since the rotation sense is then undefined.
inline double rotation_angle(Vec2 v1, Vec2 v2, double tau = kParallelTolerance) {
    if ((v1.x == 0.0 && v1.y == 0.0) || (v2.x == 0.0 && v2.y == 0.0))
        throw DegenerateAngle("rotation angle undefined for a zero vector");
    const double theta = signed_angle(v1, v2);
    if (std::abs(theta) <= tau || std::abs(theta) >= std::numbers::pi - tau)
        throw DegenerateAngle("vectors are parallel or anti-parallel");
    return theta;
}

/// Forward runs left to right on horizontal edges and bottom to top on
/// vertical ones.
enum class EdgeDir : unsigned char { Forward, Backward };

struct Edge {
    EdgeDir dir = EdgeDir::Forward;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeSlot = std::size_t;

/// Lower-left corner of a unit square.
struct SquareRef {
    int i = 0;
    int j = 0;

    friend auto operator<=>(const SquareRef&, const SquareRef&) = default;
};

enum class SquareShape { CoherentCycle, ThreeOne, BoundarySquare, AlternatingSourceSink };

inline const char* to_string(SquareShape s) {
    switch (s) {
    case SquareShape::CoherentCycle: return "coherent-cycle";
    case SquareShape::ThreeOne: return "three-one";
    case SquareShape::BoundarySquare: return "boundary-square";
    case SquareShape::AlternatingSourceSink: return "alternating-source-sink";
    }
    return "?";
}

/// Angle-based grid digraph. Edges are addressed by slot: horizontal
/// adjacencies first (row-major over the (cols-1) x rows lower endpoints),
/// then vertical ones (row-major over cols x (rows-1)).
struct GridDigraph {
    GridSpec spec;
    std::vector<Edge> horiz_edges;
    std::vector<Edge> vert_edges;

    std::size_t num_horizontal() const { return horiz_edges.size(); }
    std::size_t num_edges() const { return horiz_edges.size() + vert_edges.size(); }
    std::size_t num_squares() const { return static_cast<std::size_t>(spec.cols - 1) * (spec.rows - 1); }

    EdgeSlot horizontal_slot(int i, int j) const { return static_cast<EdgeSlot>(j) * (spec.cols - 1) + i; }
    EdgeSlot vertical_slot(int i, int j) const { return num_horizontal() + static_cast<EdgeSlot>(j) * spec.cols + i; }
    bool is_horizontal(EdgeSlot s) const { return s < num_horizontal(); }

    const Edge& edge(EdgeSlot s) const {
        return is_horizontal(s) ? horiz_edges[s] : vert_edges[s - num_horizontal()];
    }
    double weight(EdgeSlot s) const { return edge(s).weight; }

    /// Endpoints of a slot, lesser (left or lower) point first.
    std::pair<GridPoint, GridPoint> endpoints(EdgeSlot s) const {
        if (is_horizontal(s)) {
            const int i = static_cast<int>(s % (spec.cols - 1));
            const int j = static_cast<int>(s / (spec.cols - 1));
            return {{i, j}, {i + 1, j}};
        }
        const auto v = s - num_horizontal();
        const int i = static_cast<int>(v % spec.cols);
        const int j = static_cast<int>(v / spec.cols);
        return {{i, j}, {i, j + 1}};
    }

    /// (tail, head) of the directed edge.
    std::pair<GridPoint, GridPoint> arc(EdgeSlot s) const {
        auto [a, b] = endpoints(s);
        if (edge(s).dir == EdgeDir::Forward) return {a, b};
        return {b, a};
    }

    /// Bottom, right, top, left.
    std::array<EdgeSlot, 4> square_edges(SquareRef q) const {
        return {horizontal_slot(q.i, q.j), vertical_slot(q.i + 1, q.j), horizontal_slot(q.i, q.j + 1),
                vertical_slot(q.i, q.j)};
    }

    /// The one or two unit squares incident to an edge slot.
    std::vector<SquareRef> adjacent_squares(EdgeSlot s) const {
        std::vector<SquareRef> out;
        auto [a, b] = endpoints(s);
        if (is_horizontal(s)) {
            if (a.j > 0) out.push_back({a.i, a.j - 1});
            if (a.j < spec.rows - 1) out.push_back({a.i, a.j});
        } else {
            if (a.i > 0) out.push_back({a.i - 1, a.j});
            if (a.i < spec.cols - 1) out.push_back({a.i, a.j});
        }
        return out;
    }

    bool contains(SquareRef q) const { return q.i >= 0 && q.j >= 0 && q.i < spec.cols - 1 && q.j < spec.rows - 1; }

    void check() const {
        spec.check();
        if (horiz_edges.size() != static_cast<std::size_t>(spec.cols - 1) * spec.rows ||
            vert_edges.size() != static_cast<std::size_t>(spec.cols) * (spec.rows - 1))
            throw GridError("digraph edge counts do not match its grid");
        for (std::size_t s = 0; s < num_edges(); ++s) {
            const double w = weight(s);
            if (!(w > 0.0 && w < std::numbers::pi)) throw GridError("edge weight outside (0, pi) at slot " + std::to_string(s));
        }
    }

    friend bool operator==(const GridDigraph&, const GridDigraph&) = default;
};

inline Edge make_edge(Vec2 lesser, Vec2 greater, double tau) {
    const double theta = rotation_angle(lesser, greater, tau);
    return {theta > 0.0 ? EdgeDir::Forward : EdgeDir::Backward, std::abs(theta)};
}

inline GridDigraph build_grid_digraph(const GridField& field, double tau = kParallelTolerance) {
    field.check();
    const auto& s = field.spec;
    GridDigraph dg{s, {}, {}};
    dg.horiz_edges.reserve(static_cast<std::size_t>(s.cols - 1) * s.rows);
    dg.vert_edges.reserve(static_cast<std::size_t>(s.cols) * (s.rows - 1));
    auto build = [&](GridPoint a, GridPoint b) {
        try {
            return make_edge(field.at(a), field.at(b), tau);
        } catch (const DegenerateAngle& e) {
            throw DegenerateAngle(std::string(e.what()) + " between (" + std::to_string(a.i) + ", " +
                                  std::to_string(a.j) + ") and (" + std::to_string(b.i) + ", " + std::to_string(b.j) +
                                  ")");
        }
    };
    for (int j = 0; j < s.rows; ++j)
        for (int i = 0; i + 1 < s.cols; ++i) dg.horiz_edges.push_back(build({i, j}, {i + 1, j}));
    for (int j = 0; j + 1 < s.rows; ++j)
        for (int i = 0; i < s.cols; ++i) dg.vert_edges.push_back(build({i, j}, {i, j + 1}));
    return dg;
}

/// Orientation of each square edge relative to a counterclockwise walk
/// starting at the lower-left corner: +1 if the arc follows the walk.
inline std::array<int, 4> ccw_signs(const GridDigraph& dg, SquareRef q) {
    const auto e = dg.square_edges(q);
    auto fwd = [&](EdgeSlot s) { return dg.edge(s).dir == EdgeDir::Forward; };
    return {fwd(e[0]) ? 1 : -1, fwd(e[1]) ? 1 : -1, fwd(e[2]) ? -1 : 1, fwd(e[3]) ? -1 : 1};
}

inline SquareShape classify_square(const GridDigraph& dg, SquareRef q) {
    const auto s = ccw_signs(dg, q);
    const int sum = s[0] + s[1] + s[2] + s[3];
    if (sum == 4 || sum == -4) return SquareShape::CoherentCycle;
    if (sum == 2 || sum == -2) return SquareShape::ThreeOne;
    // Two with the walk, two against: either one source and one sink on a
    // diagonal (boundary square) or orientation flips at every corner.
    return s[0] == s[2] ? SquareShape::AlternatingSourceSink : SquareShape::BoundarySquare;
}

// ---------------------------------------------------------------------------
// JSON export: {"spec": {...}, "horiz_edges": [{"dir": "F"|"B", "w": ...}], "vert_edges": [...]}

inline nlohmann::json digraph_to_json(const GridDigraph& dg) {
    auto edges = [](const std::vector<Edge>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : v) arr.push_back({{"dir", e.dir == EdgeDir::Forward ? "F" : "B"}, {"w", e.weight}});
        return arr;
    };
    return {{"spec", spec_to_json(dg.spec)}, {"horiz_edges", edges(dg.horiz_edges)}, {"vert_edges", edges(dg.vert_edges)}};
}

inline GridDigraph digraph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("spec") || !j.contains("horiz_edges") || !j.contains("vert_edges"))
        throw ParseError(1, "digraph JSON needs 'spec', 'horiz_edges' and 'vert_edges'");
    GridDigraph dg{spec_from_json(j.at("spec")), {}, {}};
    auto edges = [](const nlohmann::json& arr, std::vector<Edge>& out) {
        if (!arr.is_array()) throw ParseError(1, "edge list must be an array");
        try {
            for (const auto& e : arr) {
                const auto dir = e.at("dir").get<std::string>();
                if (dir != "F" && dir != "B") throw ParseError(1, "edge dir must be 'F' or 'B'");
                out.push_back({dir == "F" ? EdgeDir::Forward : EdgeDir::Backward, e.at("w").get<double>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(1, std::string("bad edge entry: ") + e.what());
        }
    };
    edges(j.at("horiz_edges"), dg.horiz_edges);
    edges(j.at("vert_edges"), dg.vert_edges);
    dg.check();
    return dg;
}

inline bool is_digraph_json(const nlohmann::json& j) { return j.is_object() && j.contains("horiz_edges"); }

} // namespace vfpph
