#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "vfpph/digraph.hpp"
#include "vfpph/error.hpp"
#include "vfpph/field.hpp"
#include "vfpph/pph.hpp"

namespace vfpph {

/// One matched pair; an index of -1 stands for the diagonal.
struct MatchEntry {
    int first = -1;
    int second = -1;

    friend bool operator==(const MatchEntry&, const MatchEntry&) = default;
};

struct DiagramDistanceResult {
    double value = 0.0;
    std::vector<MatchEntry> matching; // indices into the input diagrams' pairs
};

/// L-infinity distance between two diagram points.
inline double point_cost(const PersistencePair& a, const PersistencePair& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

/// L-infinity distance from a point to the diagonal.
inline double diagonal_cost(const PersistencePair& a) { return (a.death - a.birth) / 2; }

namespace distance_detail {

struct Split {
    std::vector<int> finite;
    std::vector<int> infinite; // sorted by birth
};

inline Split split(const PersistenceDiagram& pd) {
    Split s;
    for (int k = 0; k < static_cast<int>(pd.pairs.size()); ++k)
        (pd.pairs[k].is_infinite() ? s.infinite : s.finite).push_back(k);
    std::stable_sort(s.infinite.begin(), s.infinite.end(),
                     [&](int a, int b) { return pd.pairs[a].birth < pd.pairs[b].birth; });
    return s;
}

/// Hopcroft-Karp maximum matching on a bipartite graph given by adjacency
/// lists from the left side.
class HopcroftKarp {
public:
    HopcroftKarp(int n_left, int n_right) : adj_(n_left), match_l_(n_left, -1), match_r_(n_right, -1), dist_(n_left) {}

    void add_edge(int l, int r) { adj_[l].push_back(r); }

    int solve() {
        int matched = 0;
        while (bfs())
            for (int l = 0; l < static_cast<int>(adj_.size()); ++l)
                if (match_l_[l] == -1 && dfs(l)) ++matched;
        return matched;
    }

    int partner_of_left(int l) const { return match_l_[l]; }

private:
    bool bfs() {
        std::queue<int> q;
        bool found = false;
        for (int l = 0; l < static_cast<int>(adj_.size()); ++l) {
            dist_[l] = match_l_[l] == -1 ? 0 : -1;
            if (dist_[l] == 0) q.push(l);
        }
        while (!q.empty()) {
            const int l = q.front();
            q.pop();
            for (int r : adj_[l]) {
                const int next = match_r_[r];
                if (next == -1)
                    found = true;
                else if (dist_[next] == -1) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    }

    bool dfs(int l) {
        for (int r : adj_[l]) {
            const int next = match_r_[r];
            if (next == -1 || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = -1;
        return false;
    }

    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_;
    std::vector<int> match_r_;
    std::vector<int> dist_;
};

// Node layout shared by both distances. Left: points of A, then diagonal
// copies of B's points. Right: points of B, then diagonal copies of A's.
struct Layout {
    const PersistenceDiagram& a;
    const PersistenceDiagram& b;
    const std::vector<int>& fa;
    const std::vector<int>& fb;

    int na() const { return static_cast<int>(fa.size()); }
    int nb() const { return static_cast<int>(fb.size()); }
    int size() const { return na() + nb(); }

    /// Cost of pairing left node l with right node r, or nothing if the
    /// pairing is not allowed.
    std::pair<bool, double> cost(int l, int r) const {
        const bool l_point = l < na();
        const bool r_point = r < nb();
        if (l_point && r_point) return {true, point_cost(a.pairs[fa[l]], b.pairs[fb[r]])};
        if (l_point) return {r - nb() == l, diagonal_cost(a.pairs[fa[l]])};
        if (r_point) return {l - na() == r, diagonal_cost(b.pairs[fb[r]])};
        return {true, 0.0};
    }

    MatchEntry entry(int l, int r) const {
        const int first = l < na() ? fa[l] : -1;
        const int second = r < nb() ? fb[r] : -1;
        return {first, second};
    }
};

/// Minimum-cost perfect assignment (Hungarian method with potentials).
/// Returns assignment[row] = column.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) assignment[p[j] - 1] = j - 1;
    return assignment;
}

} // namespace distance_detail

/// Bottleneck distance with the L-infinity ground metric. Points that never
/// die are matched among themselves by birth; if their counts differ the
/// distance is +inf.
inline DiagramDistanceResult bottleneck_distance(const PersistenceDiagram& pd1, const PersistenceDiagram& pd2) {
    using namespace distance_detail;
    const auto s1 = split(pd1);
    const auto s2 = split(pd2);
    DiagramDistanceResult result;
    if (s1.infinite.size() != s2.infinite.size()) {
        result.value = kInfinity;
        return result;
    }
    double inf_part = 0.0;
    for (std::size_t k = 0; k < s1.infinite.size(); ++k) {
        inf_part = std::max(inf_part, std::abs(pd1.pairs[s1.infinite[k]].birth - pd2.pairs[s2.infinite[k]].birth));
        result.matching.push_back({s1.infinite[k], s2.infinite[k]});
    }

    const Layout layout{pd1, pd2, s1.finite, s2.finite};
    const int n = layout.size();
    std::vector<double> candidates{0.0};
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r) {
            auto [ok, c] = layout.cost(l, r);
            if (ok) candidates.push_back(c);
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto matcher_at = [&](double radius) {
        HopcroftKarp hk(n, n);
        for (int l = 0; l < n; ++l)
            for (int r = 0; r < n; ++r) {
                auto [ok, c] = layout.cost(l, r);
                if (ok && c <= radius) hk.add_edge(l, r);
            }
        const int matched = hk.solve();
        return std::pair{matched == n, std::move(hk)};
    };

    // Smallest candidate radius admitting a perfect matching.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (matcher_at(candidates[mid]).first)
            hi = mid;
        else
            lo = mid + 1;
    }
    auto hk = matcher_at(candidates[lo]).second;
    for (int l = 0; l < n; ++l) {
        const auto e = layout.entry(l, hk.partner_of_left(l));
        if (e.first != -1 || e.second != -1) result.matching.push_back(e);
    }
    result.value = std::max(inf_part, candidates[lo]);
    return result;
}

/// q-Wasserstein distance with the L-infinity ground metric, solved exactly
/// as an assignment problem over points plus diagonal copies.
inline DiagramDistanceResult wasserstein_distance(const PersistenceDiagram& pd1, const PersistenceDiagram& pd2,
                                                  double q = 1.0) {
    using namespace distance_detail;
    if (!(q >= 1.0)) throw ParamError("Wasserstein order must be at least 1");
    const auto s1 = split(pd1);
    const auto s2 = split(pd2);
    DiagramDistanceResult result;
    if (s1.infinite.size() != s2.infinite.size()) {
        result.value = kInfinity;
        return result;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < s1.infinite.size(); ++k) {
        total += std::pow(std::abs(pd1.pairs[s1.infinite[k]].birth - pd2.pairs[s2.infinite[k]].birth), q);
        result.matching.push_back({s1.infinite[k], s2.infinite[k]});
    }

    const Layout layout{pd1, pd2, s1.finite, s2.finite};
    const int n = layout.size();
    if (n > 0) {
        double worst = 0.0;
        std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
        for (int l = 0; l < n; ++l)
            for (int r = 0; r < n; ++r) {
                auto [ok, c] = layout.cost(l, r);
                cost[l][r] = ok ? std::pow(c, q) : -1.0;
                worst = std::max(worst, cost[l][r]);
            }
        const double forbidden = worst * (n + 1) + 1.0;
        for (auto& row : cost)
            for (auto& c : row)
                if (c < 0.0) c = forbidden;
        const auto assignment = hungarian(cost);
        for (int l = 0; l < n; ++l) {
            total += cost[l][assignment[l]];
            const auto e = layout.entry(l, assignment[l]);
            if (e.first != -1 || e.second != -1) result.matching.push_back(e);
        }
    }
    result.value = std::pow(total, 1.0 / q);
    return result;
}

/// Bottleneck distance between the diagrams of consecutive fields; entry k
/// (1-based) compares field k with field k-1.
inline std::vector<std::pair<std::size_t, double>> distance_series(const std::vector<GridField>& fields,
                                                                  double tau = kParallelTolerance) {
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(fields.size());
    for (const auto& f : fields) {
        if (!diagrams.empty() && !(f.spec == fields.front().spec))
            throw SpecMismatch("all fields of a series must share one grid");
        diagrams.push_back(compute_pd1(build_grid_digraph(f, tau)));
    }
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t k = 1; k < diagrams.size(); ++k)
        out.emplace_back(k, bottleneck_distance(diagrams[k], diagrams[k - 1]).value);
    return out;
}

} // namespace vfpph
