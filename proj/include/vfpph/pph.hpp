#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "vfpph/digraph.hpp"
#include "vfpph/field_io.hpp"

namespace vfpph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Edge insertion order of the weight filtration: non-decreasing weight,
/// ties broken by slot index, or by `tie_rank[slot]` when given.
struct Filtration {
    std::vector<EdgeSlot> edges_sorted;
    std::vector<std::size_t> position; // position[slot] = index into edges_sorted
    std::vector<double> thresholds;    // distinct weights, ascending
};

inline Filtration make_filtration(const GridDigraph& dg, std::span<const std::size_t> tie_rank = {}) {
    Filtration f;
    const auto n = dg.num_edges();
    if (!tie_rank.empty() && tie_rank.size() != n) throw ParamError("tie rank must cover every edge slot");
    auto rank = [&](EdgeSlot s) { return tie_rank.empty() ? s : tie_rank[s]; };
    f.edges_sorted.resize(n);
    std::iota(f.edges_sorted.begin(), f.edges_sorted.end(), EdgeSlot{0});
    std::sort(f.edges_sorted.begin(), f.edges_sorted.end(), [&](EdgeSlot a, EdgeSlot b) {
        const double wa = dg.weight(a);
        const double wb = dg.weight(b);
        return wa < wb || (wa == wb && rank(a) < rank(b));
    });
    f.position.resize(n);
    for (std::size_t k = 0; k < n; ++k) f.position[f.edges_sorted[k]] = k;
    for (auto s : f.edges_sorted)
        if (f.thresholds.empty() || f.thresholds.back() != dg.weight(s)) f.thresholds.push_back(dg.weight(s));
    return f;
}

struct PersistencePair {
    double birth = 0.0;
    double death = kInfinity;
    EdgeSlot creator = 0; // edge whose insertion created the class

    bool is_infinite() const { return std::isinf(death); }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }

    /// Births of the classes that never die, ascending.
    std::vector<double> infinite_births() const {
        std::vector<double> out;
        for (const auto& p : pairs)
            if (p.is_infinite()) out.push_back(p.birth);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Rank of H1 at threshold delta.
    int betti_at(double delta) const {
        int n = 0;
        for (const auto& p : pairs)
            if (p.birth <= delta && delta < p.death) ++n;
        return n;
    }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

namespace pph_detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns false when a and b were already connected.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

// Symmetric difference of two sorted index lists (GF(2) column addition).
inline void add_column(std::vector<std::size_t>& target, const std::vector<std::size_t>& source) {
    std::vector<std::size_t> out;
    out.reserve(target.size() + source.size());
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(), std::back_inserter(out));
    target.swap(out);
}

} // namespace pph_detail

/// One-dimensional persistent path homology of the weight filtration.
///
/// In a grid digraph the 1-boundaries are spanned by boundary squares, so
/// the computation runs on the filtered cell complex made of the grid graph
/// plus one 2-cell per boundary square (entering with its heaviest edge).
/// Births come from a union-find pass over the sorted edges; deaths from a
/// GF(2) reduction of the square columns. Zero-length pairs are dropped.
inline PersistenceDiagram compute_pd1(const GridDigraph& dg, std::span<const std::size_t> tie_rank = {}) {
    dg.check();
    const auto filt = make_filtration(dg, tie_rank);
    const auto& spec = dg.spec;

    // Birth phase: an edge closing a loop is positive.
    pph_detail::UnionFind uf(spec.num_points());
    std::vector<bool> positive(dg.num_edges(), false);
    for (auto s : filt.edges_sorted) {
        auto [a, b] = dg.endpoints(s);
        positive[s] = !uf.unite(spec.index(a), spec.index(b));
    }

    // Death phase: boundary squares in filtration order, columns hold edge
    // positions in the filtration.
    struct Cell {
        std::size_t last; // filtration position of the heaviest edge
        std::size_t square;
        std::vector<std::size_t> column;
    };
    std::vector<Cell> cells;
    for (int j = 0; j + 1 < spec.rows; ++j)
        for (int i = 0; i + 1 < spec.cols; ++i) {
            const SquareRef q{i, j};
            if (classify_square(dg, q) != SquareShape::BoundarySquare) continue;
            std::vector<std::size_t> col;
            for (auto s : dg.square_edges(q)) col.push_back(filt.position[s]);
            std::sort(col.begin(), col.end());
            cells.push_back({col.back(), static_cast<std::size_t>(j) * (spec.cols - 1) + i, std::move(col)});
        }
    std::sort(cells.begin(), cells.end(),
              [](const Cell& x, const Cell& y) { return std::tie(x.last, x.square) < std::tie(y.last, y.square); });

    std::unordered_map<std::size_t, std::size_t> pivot_owner; // low row -> reduced column
    std::vector<bool> killed(dg.num_edges(), false);
    PersistenceDiagram pd;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto& col = cells[c].column;
        while (!col.empty()) {
            auto it = pivot_owner.find(col.back());
            if (it == pivot_owner.end()) break;
            pph_detail::add_column(col, cells[it->second].column);
        }
        if (col.empty()) continue; // cannot happen in a planar grid; would be a 2-cycle
        pivot_owner.emplace(col.back(), c);
        const EdgeSlot creator = filt.edges_sorted[col.back()];
        killed[creator] = true;
        const double birth = dg.weight(creator);
        const double death = dg.weight(filt.edges_sorted[cells[c].last]);
        if (birth < death) pd.pairs.push_back({birth, death, creator});
    }
    for (auto s : filt.edges_sorted)
        if (positive[s] && !killed[s]) pd.pairs.push_back({dg.weight(s), kInfinity, s});

    std::sort(pd.pairs.begin(), pd.pairs.end(), [](const PersistencePair& x, const PersistencePair& y) {
        return std::tie(x.birth, x.death, x.creator) < std::tie(y.birth, y.death, y.creator);
    });
    return pd;
}

// ---------------------------------------------------------------------------
// Diagram I/O. CSV rows are `birth,death` with `inf` for classes that never die.

inline void write_diagram_csv(const PersistenceDiagram& pd, std::ostream& out, int digits = 17) {
    out << "birth,death\n";
    for (const auto& p : pd.pairs) out << format_real(p.birth, digits) << ',' << format_real(p.death, digits) << '\n';
}

inline PersistenceDiagram read_diagram_csv(std::istream& in) {
    using namespace io_detail;
    PersistenceDiagram pd;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || (lineno == 1 && t == "birth,death")) continue;
        const auto cells = split(t, ',');
        if (cells.size() != 2) throw ParseError(lineno, "expected birth,death");
        PersistencePair p;
        if (!parse_number(cells[0], p.birth)) throw ParseError(lineno, "bad birth value");
        if (cells[1] == "inf")
            p.death = kInfinity;
        else if (!parse_number(cells[1], p.death))
            throw ParseError(lineno, "bad death value");
        pd.pairs.push_back(p);
    }
    return pd;
}

inline nlohmann::json diagram_to_json(const PersistenceDiagram& pd) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pd.pairs) {
        nlohmann::json death = p.is_infinite() ? nlohmann::json("inf") : nlohmann::json(p.death);
        arr.push_back({{"birth", p.birth}, {"death", death}, {"creator_edge", p.creator}});
    }
    return {{"pairs", std::move(arr)}};
}

} // namespace vfpph
