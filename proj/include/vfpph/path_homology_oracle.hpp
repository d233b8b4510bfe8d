#pragma once

// Brute-force path homology of small simple digraphs over the rationals.
// Slow by construction; it exists to check the fast grid persistence.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vfpph/digraph.hpp"
#include "vfpph/error.hpp"

namespace vfpph {

using Rational = boost::multiprecision::cpp_rational;

struct SmallDigraph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges; // (tail, head)

    void check() const {
        std::set<std::pair<int, int>> seen;
        for (auto [a, b] : edges) {
            if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices) throw ParamError("edge endpoint out of range");
            if (a == b) throw ParamError("loops are not allowed in a simple digraph");
            if (!seen.insert({a, b}).second) throw ParamError("multi-edges are not allowed in a simple digraph");
        }
    }
};

inline constexpr int kOracleMaxVertices = 64;

namespace oracle_detail {

using SparseRow = std::map<int, Rational>;

/// Incremental Gauss-Jordan elimination; rows stay in reduced row echelon form.
class RowReducer {
public:
    /// Returns true if the row was independent of those already added.
    bool add(SparseRow row) {
        for (auto it = row.begin(); it != row.end();) {
            auto piv = pivot_row_.find(it->first);
            if (piv == pivot_row_.end()) {
                ++it;
                continue;
            }
            const Rational factor = it->second;
            const int col = it->first;
            for (const auto& [c, v] : rows_[piv->second]) {
                auto& target = row[c];
                target -= factor * v;
            }
            row.erase(col);
            // Reduced rows are zero in every other pivot column, so only
            // non-pivot entries were introduced; prune zeros and restart.
            for (auto z = row.begin(); z != row.end();) z = z->second == 0 ? row.erase(z) : std::next(z);
            it = row.begin();
        }
        if (row.empty()) return false;
        const int pcol = row.begin()->first;
        const Rational lead = row.begin()->second;
        for (auto& [c, v] : row) v /= lead;
        for (auto& other : rows_) {
            auto hit = other.find(pcol);
            if (hit == other.end()) continue;
            const Rational factor = hit->second;
            for (const auto& [c, v] : row) other[c] -= factor * v;
            for (auto z = other.begin(); z != other.end();) z = z->second == 0 ? other.erase(z) : std::next(z);
        }
        pivot_row_.emplace(pcol, rows_.size());
        rows_.push_back(std::move(row));
        return true;
    }

    std::size_t rank() const { return rows_.size(); }
    const std::vector<SparseRow>& rows() const { return rows_; }
    bool is_pivot(int col) const { return pivot_row_.count(col) != 0; }
    const std::map<int, std::size_t>& pivots() const { return pivot_row_; }

private:
    std::vector<SparseRow> rows_;
    std::map<int, std::size_t> pivot_row_;
};

/// Basis of {x : C x = 0} for a constraint matrix with `ncols` columns.
inline std::vector<SparseRow> null_space(const std::vector<SparseRow>& constraints, int ncols) {
    RowReducer rr;
    for (const auto& r : constraints) rr.add(r);
    std::vector<SparseRow> basis;
    for (int f = 0; f < ncols; ++f) {
        if (rr.is_pivot(f)) continue;
        SparseRow x;
        x[f] = 1;
        for (const auto& [pcol, ridx] : rr.pivots()) {
            const auto& row = rr.rows()[ridx];
            auto hit = row.find(f);
            if (hit != row.end()) x[pcol] = -hit->second;
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

} // namespace oracle_detail

/// dim H1 of the path complex of `g`, by direct linear algebra:
/// dim ker(d1 on A1) - rank d(Omega_2), with Omega_2 = {v in A2 : dv in A1}.
inline int oracle_h1_dim(const SmallDigraph& g) {
    using namespace oracle_detail;
    if (g.n_vertices > kOracleMaxVertices)
        throw ScaleError("oracle limited to " + std::to_string(kOracleMaxVertices) + " vertices, got " +
                         std::to_string(g.n_vertices));
    g.check();

    std::map<std::pair<int, int>, int> edge_id;
    for (std::size_t k = 0; k < g.edges.size(); ++k) edge_id.emplace(g.edges[k], static_cast<int>(k));
    const int n_edges = static_cast<int>(g.edges.size());

    // Cycles: kernel of d1 e_ab = e_b - e_a on A1.
    RowReducer d1;
    for (auto [a, b] : g.edges) {
        SparseRow r;
        r[a] = -1;
        r[b] = 1;
        d1.add(std::move(r));
    }
    const int dim_z1 = n_edges - static_cast<int>(d1.rank());

    // Allowed 2-paths a->b->c (a == c allowed: non-regular faces vanish).
    std::vector<std::array<int, 3>> paths;
    std::vector<std::vector<int>> out(g.n_vertices);
    for (auto [a, b] : g.edges) out[a].push_back(b);
    for (auto [a, b] : g.edges)
        for (int c : out[b]) paths.push_back({a, b, c});
    const int n_paths = static_cast<int>(paths.size());

    // Omega_2: the middle face e_ac must cancel whenever a->c is not an edge.
    std::map<std::pair<int, int>, SparseRow> constraint;
    for (int p = 0; p < n_paths; ++p) {
        const auto [a, b, c] = paths[p];
        if (a == c || edge_id.count({a, c})) continue;
        constraint[{a, c}][p] = 1;
    }
    std::vector<SparseRow> rows;
    for (auto& [key, r] : constraint) rows.push_back(std::move(r));
    const auto omega2 = null_space(rows, n_paths);

    // Boundaries: d e_abc = e_bc - e_ac + e_ab, restricted to allowed terms.
    RowReducer b1;
    for (const auto& v : omega2) {
        SparseRow img;
        for (const auto& [p, coef] : v) {
            const auto [a, b, c] = paths[p];
            img[edge_id.at({b, c})] += coef;
            img[edge_id.at({a, b})] += coef;
            if (a != c) {
                auto it = edge_id.find({a, c});
                if (it != edge_id.end()) img[it->second] -= coef;
            }
        }
        for (auto z = img.begin(); z != img.end();) z = z->second == 0 ? img.erase(z) : std::next(z);
        b1.add(std::move(img));
    }
    return dim_z1 - static_cast<int>(b1.rank());
}

/// The sub-digraph of `dg` holding the edges of weight <= delta, on all grid points.
inline SmallDigraph threshold_subgraph(const GridDigraph& dg, double delta) {
    SmallDigraph g;
    g.n_vertices = static_cast<int>(dg.spec.num_points());
    for (EdgeSlot s = 0; s < dg.num_edges(); ++s) {
        if (dg.weight(s) > delta) continue;
        auto [t, h] = dg.arc(s);
        g.edges.push_back({static_cast<int>(dg.spec.index(t)), static_cast<int>(dg.spec.index(h))});
    }
    return g;
}

inline int oracle_h1_at(const GridDigraph& dg, double delta) { return oracle_h1_dim(threshold_subgraph(dg, delta)); }

/// dim H1 of every threshold sub-digraph, keyed by the distinct edge weights.
inline std::map<double, int> oracle_betti_curve(const GridDigraph& dg) {
    if (dg.spec.num_points() > static_cast<std::size_t>(kOracleMaxVertices))
        throw ScaleError("grid too large for the path homology oracle");
    std::set<double> weights;
    for (EdgeSlot s = 0; s < dg.num_edges(); ++s) weights.insert(dg.weight(s));
    std::map<double, int> curve;
    for (double w : weights) curve[w] = oracle_h1_at(dg, w);
    return curve;
}

} // namespace vfpph
