#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vfpph/singular.hpp"

using namespace vfpph;
using fixtures::kPi;

namespace {

std::vector<SingularityReport> locate(const GridField& f) {
    const auto dg = build_grid_digraph(f);
    return locate_singularities(f, dg, compute_pd1(dg));
}

bool inside(const GridSpec& s, SquareRef q, Vec2 p) {
    const Vec2 ll = s.coord(q.i, q.j);
    return p.x > ll.x && p.x < ll.x + s.eps && p.y > ll.y && p.y < ll.y + s.eps;
}

} // namespace

TEST(Winding, UnitSquares) {
    const GridField rot{GridSpec{-1, -1, 2, 2, 2}, {{1, -1}, {1, 1}, {-1, -1}, {-1, 1}}};
    EXPECT_EQ(winding_number(rot, {0, 0}), 1);
    GridField rev = rot;
    for (auto& v : rev.vectors) v = {-v.y, v.x};
    EXPECT_EQ(winding_number(rev, {0, 0}), 1);
    // Saddle: (x, -y).
    const GridField saddle{GridSpec{-1, -1, 2, 2, 2}, {{-1, 1}, {1, 1}, {-1, -1}, {1, -1}}};
    EXPECT_EQ(winding_number(saddle, {0, 0}), -1);
    EXPECT_EQ(winding_number(fixtures::tilted_flow(2, 2), {0, 0}), 0);
}

TEST(WeightedCenter, EqualWeightsGiveMidpoint) {
    const auto dg = fixtures::square_digraph({1, 1, 1, 1}, {0.7, 0.7, 0.7, 0.7});
    const Vec2 c = weighted_center(dg, {0, 0});
    EXPECT_NEAR(c.x, 0.5, 1e-15);
    EXPECT_NEAR(c.y, 0.5, 1e-15);
}

TEST(WeightedCenter, HeavyBottomPullsDown) {
    const double d = 0.3;
    const auto dg = fixtures::square_digraph({1, 1, 1, 1}, {2 * d, d, d, d});
    const Vec2 c = weighted_center(dg, {0, 0});
    // (2d*(.5,0) + d*(1,.5) + d*(.5,1) + d*(0,.5)) / 5d
    EXPECT_NEAR(c.x, 0.5, 1e-15);
    EXPECT_NEAR(c.y, 0.4, 1e-15);
}

TEST(Locate, SpiralOnEightByEight) {
    const double eps = 0.5;
    const Vec2 center{0.5 * 3 + 0.21, 0.5 * 4 + 0.33};
    const auto f = gen_spiral({1.0, kPi / 3, 1.0, center}, GridSpec{0, 0, eps, 8, 8});
    const auto reports = locate(f);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].square, (SquareRef{3, 4}));
    EXPECT_EQ(reports[0].index, 1);
    EXPECT_LT(std::abs(reports[0].center.x - center.x), eps / 2);
    EXPECT_LT(std::abs(reports[0].center.y - center.y), eps / 2);
}

TEST(Locate, NoSingularityNoReport) {
    const auto f = fixtures::tilted_flow(7, 6);
    const auto dg = build_grid_digraph(f);
    EXPECT_TRUE(compute_pd1(dg).infinite_births().empty());
    EXPECT_TRUE(locate(f).empty());
}

TEST(Locate, TwoSingularities) {
    const GridSpec s{0, 0, 1, 12, 12};
    const Vec2 c1{2.45, 3.62}, c2{8.31, 7.55};
    const auto f = multiply_fields(gen_spiral({1.0, kPi / 2, 1.0, c1}, s), gen_spiral({-1.0, kPi / 3, 1.2, c2}, s));
    auto reports = locate(f);
    ASSERT_EQ(reports.size(), 2u);
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.square < b.square; });
    EXPECT_TRUE(inside(s, reports[0].square, c1));
    EXPECT_TRUE(inside(s, reports[1].square, c2));
}

TEST(Locate, ReportsAreSortedByTrigger) {
    const GridSpec s{0, 0, 1, 12, 12};
    const auto f = multiply_fields(gen_spiral({1.0, kPi / 2, 1.0, {2.45, 3.62}}, s),
                                   gen_spiral({1.0, kPi / 4, 1.0, {8.31, 7.55}}, s));
    const auto reports = locate(f);
    for (std::size_t k = 1; k < reports.size(); ++k)
        EXPECT_LE(reports[k - 1].trigger_weight, reports[k].trigger_weight);
    std::ostringstream csv;
    write_reports_csv(reports, csv);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "square_i,square_j,index,center_x,center_y,trigger_weight");
}

TEST(Locate, SaddleIsNotReported) {
    // Product with a conjugated spiral gives an index -1 zero.
    const GridSpec s{0, 0, 1, 10, 10};
    auto conj = gen_spiral({1.0, kPi / 2, 1.0, {6.4, 6.3}}, s);
    for (auto& v : conj.vectors) v.y = -v.y;
    const auto f = multiply_fields(gen_spiral({1.0, kPi / 2, 1.0, {2.4, 2.7}}, s), conj);
    const auto dg = build_grid_digraph(f);
    std::vector<SquareRef> saddles;
    const auto reports = locate_singularities(f, dg, compute_pd1(dg), &saddles);
    for (const auto& r : reports) EXPECT_EQ(r.index, 1);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].square, (SquareRef{2, 2}));
    for (auto q : saddles) EXPECT_EQ(winding_number(f, q), -1);
}

TEST(Winding, RectanglesAddUp) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const auto fx = fixtures::random_spiral(rng, 4, 12);
        const auto& s = fx.field.spec;
        std::uniform_int_distribution<int> ci(0, s.cols - 2), cj(0, s.rows - 2);
        int i0 = ci(rng), i1 = ci(rng), j0 = cj(rng), j1 = cj(rng);
        if (i0 > i1) std::swap(i0, i1);
        if (j0 > j1) std::swap(j0, j1);
        ++i1;
        ++j1;
        int sum = 0;
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i) sum += winding_number(fx.field, {i, j});
        std::vector<GridPoint> loop;
        for (int i = i0; i < i1; ++i) loop.push_back({i, j0});
        for (int j = j0; j < j1; ++j) loop.push_back({i1, j});
        for (int i = i1; i > i0; --i) loop.push_back({i, j1});
        for (int j = j1; j > j0; --j) loop.push_back({i0, j});
        EXPECT_EQ(loop_winding_number(fx.field, loop), sum);
        EXPECT_NEAR(fixtures::rectangle_turns(fx.field, i0, j0, i1, j1), sum, 1e-9);
    }
}
