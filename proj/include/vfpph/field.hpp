#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "vfpph/error.hpp"

namespace vfpph {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Signed angle in (-pi, pi] that rotates `a` onto the direction of `b`.
/// Counterclockwise is positive.
inline double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

/// Integer grid point; `i` is the column, `j` the row.
struct GridPoint {
    int i = 0;
    int j = 0;

    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Uniform square grid: `cols` x `rows` points spaced `eps` apart, starting at
/// (x0, y0). Point (i, j) sits at (x0 + i*eps, y0 + j*eps).
struct GridSpec {
    double x0 = 0.0;
    double y0 = 0.0;
    double eps = 1.0;
    int cols = 0;
    int rows = 0;

    std::size_t num_points() const { return static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * cols + i; }
    std::size_t index(GridPoint p) const { return index(p.i, p.j); }
    Vec2 coord(int i, int j) const { return {x0 + i * eps, y0 + j * eps}; }
    Vec2 coord(GridPoint p) const { return coord(p.i, p.j); }
    bool contains(GridPoint p) const { return p.i >= 0 && p.j >= 0 && p.i < cols && p.j < rows; }

    void check() const {
        if (cols < 2 || rows < 2)
            throw GridError("grid needs at least 2x2 points, got " + std::to_string(cols) + "x" +
                            std::to_string(rows));
        if (!(eps > 0.0) || !std::isfinite(eps))
            throw GridError("grid spacing must be positive and finite");
        if (!std::isfinite(x0) || !std::isfinite(y0))
            throw GridError("grid origin must be finite");
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Planar vector field sampled on a GridSpec, stored row-major.
struct GridField {
    GridSpec spec;
    std::vector<Vec2> vectors;

    const Vec2& at(int i, int j) const { return vectors[spec.index(i, j)]; }
    Vec2& at(int i, int j) { return vectors[spec.index(i, j)]; }
    const Vec2& at(GridPoint p) const { return vectors[spec.index(p)]; }

    /// Throws GridError unless the spec is valid and holds exactly cols*rows vectors.
    void check() const {
        spec.check();
        if (vectors.size() != spec.num_points())
            throw GridError("field has " + std::to_string(vectors.size()) + " vectors, grid needs " +
                            std::to_string(spec.num_points()));
    }

    friend bool operator==(const GridField&, const GridField&) = default;
};

/// Logarithmic-spiral field model. `a` fixes chirality (its sign) and
/// magnitude, `alpha` the pitch, `rho` the width-to-height ratio.
struct SpiralParams {
    double a = 1.0;
    double alpha = std::numbers::pi / 2;
    double rho = 1.0;
    Vec2 center;

    void check() const {
        if (a == 0.0 || !std::isfinite(a)) throw ParamError("spiral parameter a must be nonzero");
        if (!(alpha > 0.0 && alpha < std::numbers::pi)) throw ParamError("spiral alpha must lie in (0, pi)");
        if (!(rho > 0.0) || !std::isfinite(rho)) throw ParamError("spiral rho must be positive");
    }
};

/// Closed-form spiral vector at offset d from the center, before scaling by a.
inline Vec2 spiral_vector(const SpiralParams& p, Vec2 d) {
    const double cot = std::tan(std::numbers::pi / 2 - p.alpha); // exactly 0 at alpha = pi/2
    return {d.x * cot - p.rho * d.y, d.y * cot + d.x / p.rho};
}

/// Samples the spiral model on `spec`. Each vector is `a * (P, Q)` so that a
/// negative `a` reverses circulation without moving the singularity.
inline GridField gen_spiral(const SpiralParams& params, const GridSpec& spec) {
    spec.check();
    params.check();
    GridField field{spec, std::vector<Vec2>(spec.num_points())};
    for (int j = 0; j < spec.rows; ++j) {
        for (int i = 0; i < spec.cols; ++i) {
            const Vec2 p = spec.coord(i, j);
            const Vec2 d{p.x - params.center.x, p.y - params.center.y};
            if (d.x == 0.0 && d.y == 0.0)
                throw CenterOnGridPoint("spiral center coincides with grid point (" + std::to_string(i) + ", " +
                                        std::to_string(j) + ")");
            const Vec2 v = spiral_vector(params, d);
            field.at(i, j) = {params.a * v.x, params.a * v.y};
        }
    }
    return field;
}

/// Pointwise complex product of two fields on the same grid. The zeros of
/// the product are the union of both zero sets and indices add, so this
/// composes several singular patterns into one field.
inline GridField multiply_fields(const GridField& lhs, const GridField& rhs) {
    lhs.check();
    rhs.check();
    if (!(lhs.spec == rhs.spec)) throw SpecMismatch("cannot multiply fields on different grids");
    GridField out{lhs.spec, std::vector<Vec2>(lhs.vectors.size())};
    for (std::size_t k = 0; k < out.vectors.size(); ++k) {
        const Vec2 a = lhs.vectors[k];
        const Vec2 b = rhs.vectors[k];
        out.vectors[k] = {a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x};
    }
    return out;
}

/// Rotates every vector by `angle` radians.
inline GridField rotate_vectors(GridField field, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (auto& v : field.vectors) v = {c * v.x - s * v.y, s * v.x + c * v.y};
    return field;
}

inline GridField scale_vectors(GridField field, double factor) {
    for (auto& v : field.vectors) v = {factor * v.x, factor * v.y};
    return field;
}

// ---------------------------------------------------------------------------
// Assumption checks

enum class Assumption { ParallelNeighbors, ZeroVector, Density };

struct Violation {
    Assumption kind;
    GridPoint a;
    GridPoint b; // equals `a` for single-point violations
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    /// Density of singularities cannot be judged from samples alone.
    bool density_verifiable = false;

    bool ok() const { return violations.empty(); }
};

/// Default tolerance (radians) for declaring neighboring vectors parallel.
inline constexpr double kParallelTolerance = 1e-9;

inline ValidationReport validate_assumptions(const GridField& field, double tau = kParallelTolerance) {
    field.check();
    ValidationReport report;
    const auto& spec = field.spec;
    auto is_zero = [](Vec2 v) { return v.x == 0.0 && v.y == 0.0; };

    for (int j = 0; j < spec.rows; ++j)
        for (int i = 0; i < spec.cols; ++i)
            if (is_zero(field.at(i, j)))
                report.violations.push_back({Assumption::ZeroVector, {i, j}, {i, j}, "zero vector"});

    auto check_pair = [&](GridPoint a, GridPoint b) {
        const Vec2 va = field.at(a);
        const Vec2 vb = field.at(b);
        if (is_zero(va) || is_zero(vb)) return;
        const double theta = std::abs(signed_angle(va, vb));
        if (theta <= tau)
            report.violations.push_back({Assumption::ParallelNeighbors, a, b, "parallel"});
        else if (theta >= std::numbers::pi - tau)
            report.violations.push_back({Assumption::ParallelNeighbors, a, b, "anti-parallel"});
    };
    for (int j = 0; j < spec.rows; ++j)
        for (int i = 0; i + 1 < spec.cols; ++i) check_pair({i, j}, {i + 1, j});
    for (int j = 0; j + 1 < spec.rows; ++j)
        for (int i = 0; i < spec.cols; ++i) check_pair({i, j}, {i, j + 1});
    return report;
}

} // namespace vfpph
