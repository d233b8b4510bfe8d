#pragma once

// Fixture generators and brute-force reference computations shared by the
// unit tests and the acceptance runner.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "vfpph/digraph.hpp"
#include "vfpph/field.hpp"
#include "vfpph/pph.hpp"

namespace fixtures {

using namespace vfpph;

inline constexpr double kPi = std::numbers::pi;

struct SpiralFixture {
    GridField field;
    SpiralParams params;
    SquareRef square; // unit square holding the center
};

/// Random spiral on a random grid, center strictly inside a random square
/// and away from its edges.
inline SpiralFixture random_spiral(std::mt19937_64& rng, int min_size, int max_size) {
    std::uniform_int_distribution<int> size(min_size, max_size);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GridSpec spec;
    spec.cols = size(rng);
    spec.rows = size(rng);
    spec.eps = 0.25 + 1.75 * u(rng);
    spec.x0 = -5.0 + 10.0 * u(rng);
    spec.y0 = -5.0 + 10.0 * u(rng);

    SpiralFixture f;
    f.square = {std::uniform_int_distribution<int>(0, spec.cols - 2)(rng),
                std::uniform_int_distribution<int>(0, spec.rows - 2)(rng)};
    const double fx = 0.05 + 0.9 * u(rng);
    const double fy = 0.05 + 0.9 * u(rng);
    f.params.center = {spec.x0 + (f.square.i + fx) * spec.eps, spec.y0 + (f.square.j + fy) * spec.eps};
    f.params.alpha = kPi / 6 + (2 * kPi / 3) * u(rng);
    f.params.rho = std::exp(std::log(0.5) + std::log(4.0) * u(rng));
    f.params.a = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * u(rng));
    f.field = gen_spiral(f.params, spec);
    return f;
}

/// Digraph on a cols x rows grid with independent random directions and
/// weights drawn from `levels` (distinct) or uniform in (0, pi).
inline GridDigraph random_digraph(std::mt19937_64& rng, int cols, int rows, int levels = 0) {
    GridDigraph dg{GridSpec{0.0, 0.0, 1.0, cols, rows}, {}, {}};
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> w(0.01, kPi - 0.01);
    std::uniform_int_distribution<int> level(1, std::max(levels, 1));
    auto edge = [&]() {
        const double weight = levels > 0 ? level(rng) * (kPi / (levels + 1)) : w(rng);
        return Edge{coin(rng) ? EdgeDir::Forward : EdgeDir::Backward, weight};
    };
    for (int k = 0; k < (cols - 1) * rows; ++k) dg.horiz_edges.push_back(edge());
    for (int k = 0; k < cols * (rows - 1); ++k) dg.vert_edges.push_back(edge());
    return dg;
}

/// Single-square digraph on a 2x2 grid from counterclockwise walk signs
/// (bottom, right, top, left) and weights in the same order.
inline GridDigraph square_digraph(std::array<int, 4> signs, std::array<double, 4> w = {0.1, 0.2, 0.3, 0.4}) {
    GridDigraph dg{GridSpec{0.0, 0.0, 1.0, 2, 2}, {}, {}};
    auto dir = [](bool fwd) { return fwd ? EdgeDir::Forward : EdgeDir::Backward; };
    dg.horiz_edges = {{dir(signs[0] > 0), w[0]}, {dir(signs[2] < 0), w[2]}};
    dg.vert_edges = {{dir(signs[3] < 0), w[3]}, {dir(signs[1] > 0), w[1]}};
    return dg;
}

/// Field with gently varying direction and no singularity.
inline GridField tilted_flow(int cols, int rows, double eps = 1.0) {
    GridField f{GridSpec{0.0, 0.0, eps, cols, rows}, {}};
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i) f.vectors.push_back({1.0, 0.1 * i + 0.07 * j + 0.013 * i * j});
    return f;
}

/// Sum of signed rotation angles around the rectangle [i0, i1] x [j0, j1]
/// walked counterclockwise, in turns.
inline double rectangle_turns(const GridField& f, int i0, int j0, int i1, int j1) {
    std::vector<GridPoint> loop;
    for (int i = i0; i < i1; ++i) loop.push_back({i, j0});
    for (int j = j0; j < j1; ++j) loop.push_back({i1, j});
    for (int i = i1; i > i0; --i) loop.push_back({i, j1});
    for (int j = j1; j > j0; --j) loop.push_back({i0, j});
    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const Vec2 a = f.at(loop[k]);
        const Vec2 b = f.at(loop[(k + 1) % loop.size()]);
        // Independent of the library's angle helper: difference of polar angles.
        double d = std::atan2(b.y, b.x) - std::atan2(a.y, a.x);
        while (d > kPi) d -= 2 * kPi;
        while (d <= -kPi) d += 2 * kPi;
        total += d;
    }
    return total / (2 * kPi);
}

// ---------------------------------------------------------------------------
// Brute-force diagram distances: enumerate every partial injection between
// the finite points and every bijection between the infinite ones.

inline double linf(const PersistencePair& a, const PersistencePair& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

// Calls visit(cost list) for every admissible matching.
inline void enumerate_matchings(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                const std::function<void(const std::vector<double>&)>& visit) {
    std::vector<PersistencePair> xf, xi, yf, yi;
    for (const auto& p : x.pairs) (p.is_infinite() ? xi : xf).push_back(p);
    for (const auto& p : y.pairs) (p.is_infinite() ? yi : yf).push_back(p);
    if (xi.size() != yi.size()) {
        visit({std::numeric_limits<double>::infinity()});
        return;
    }
    std::vector<int> perm(yi.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    do {
        std::vector<double> costs;
        for (std::size_t k = 0; k < xi.size(); ++k) costs.push_back(std::abs(xi[k].birth - yi[perm[k]].birth));
        std::vector<char> used(yf.size(), 0);
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == xf.size()) {
                auto all = costs;
                for (std::size_t r = 0; r < yf.size(); ++r)
                    if (!used[r]) all.push_back((yf[r].death - yf[r].birth) / 2);
                visit(all);
                return;
            }
            costs.push_back((xf[k].death - xf[k].birth) / 2);
            rec(k + 1);
            costs.pop_back();
            for (std::size_t r = 0; r < yf.size(); ++r) {
                if (used[r]) continue;
                used[r] = 1;
                costs.push_back(linf(xf[k], yf[r]));
                rec(k + 1);
                costs.pop_back();
                used[r] = 0;
            }
        };
        rec(0);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

inline double brute_bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y) {
    double best = std::numeric_limits<double>::infinity();
    enumerate_matchings(x, y, [&](const std::vector<double>& c) {
        double worst = 0.0;
        for (double v : c) worst = std::max(worst, v);
        best = std::min(best, worst);
    });
    return best;
}

inline double brute_wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, double q) {
    double best = std::numeric_limits<double>::infinity();
    enumerate_matchings(x, y, [&](const std::vector<double>& c) {
        double sum = 0.0;
        for (double v : c) sum += std::pow(v, q);
        best = std::min(best, std::pow(sum, 1.0 / q));
    });
    return best;
}

/// Small random diagram with births/deaths on a coarse lattice.
inline PersistenceDiagram random_diagram(std::mt19937_64& rng, int max_finite, int n_infinite) {
    std::uniform_int_distribution<int> count(0, max_finite);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    PersistenceDiagram pd;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
        const double b = u(rng);
        pd.pairs.push_back({b, b + 0.01 + u(rng), 0});
    }
    for (int k = 0; k < n_infinite; ++k) pd.pairs.push_back({u(rng), std::numeric_limits<double>::infinity(), 0});
    return pd;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("vfpph_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fixtures
