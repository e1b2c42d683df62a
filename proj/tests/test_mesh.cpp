#include "vemref/mesh.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace vemref;

namespace {

Polygon rect(double x0, double y0, double x1, double y1)
{
    return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

int vertex_at(const Mesh& m, Point2 p)
{
    for (std::size_t v = 0; v < m.vertex_count(); ++v)
        if (distance(m.local_point(static_cast<int>(v), 0), p) < 1e-12)
            return static_cast<int>(v);
    return -1;
}

// Incidence oracle: the set of cells whose loop contains each vertex pair.
std::map<std::pair<int, int>, std::vector<int>> incidence(const Mesh& m)
{
    std::map<std::pair<int, int>, std::vector<int>> out;
    for (int c : m.active_cells()) {
        const auto& vs = m.cell(c).vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const int a = vs[i], b = vs[(i + 1) % vs.size()];
            out[{std::min(a, b), std::max(a, b)}].push_back(c);
        }
    }
    return out;
}

} // namespace

TEST(BuildMesh, SingleSquare)
{
    const Mesh m = build_mesh({rect(0, 0, 1, 1)});
    EXPECT_EQ(m.active_cell_count(), 1u);
    EXPECT_EQ(m.active_edges().size(), 4u);
    for (int e : m.active_edges()) {
        EXPECT_EQ(m.edge(e).cells.size(), 1u);
        EXPECT_EQ(m.edge(e).label, BoundaryLabel::dirichlet);
    }
    EXPECT_EQ(check_consistency(m), "");
}

TEST(BuildMesh, TwoSquaresShareEdge)
{
    const Mesh m = build_mesh({rect(0, 0, 1, 1), rect(1, 0, 2, 1)});
    EXPECT_EQ(m.active_cell_count(), 2u);
    EXPECT_EQ(m.active_edges().size(), 7u);
    int interior = 0;
    for (int e : m.active_edges())
        if (m.edge(e).cells.size() == 2) {
            ++interior;
            EXPECT_EQ(m.edge(e).label, BoundaryLabel::interior);
        }
    EXPECT_EQ(interior, 1);
}

TEST(BuildMesh, LShapeHangingNode)
{
    const Mesh m = build_mesh({rect(-1, 0, 1, 1), rect(0, -1, 1, 0)});
    EXPECT_EQ(m.active_cell_count(), 2u);
    const int origin = vertex_at(m, {0, 0});
    ASSERT_GE(origin, 0);
    const auto& upper = m.cell(0);
    EXPECT_EQ(upper.vertices.size(), 5u);
    EXPECT_NE(std::find(upper.vertices.begin(), upper.vertices.end(), origin), upper.vertices.end());
    EXPECT_EQ(m.corner_positions(0).size(), 4u);

    // Manual adjacency table: the only shared edge is (0,0)-(1,0).
    const int v10 = vertex_at(m, {1, 0});
    const int shared = m.find_edge(origin, v10);
    ASSERT_GE(shared, 0);
    EXPECT_EQ(m.edge(shared).cells.size(), 2u);
    for (int e : m.active_edges())
        if (e != shared)
            EXPECT_EQ(m.edge(e).cells.size(), 1u);
    EXPECT_EQ(m.active_edges().size(), 8u);
    EXPECT_NEAR(m.total_active_area(), 3.0, 1e-14);
    EXPECT_EQ(check_consistency(m), "");
}

TEST(BuildMesh, Errors)
{
    EXPECT_THROW(build_mesh({rect(0, 0, 1, 1), rect(0, 0, 1, 1)}), MeshError);
    // A rule answering `interior` on an unmatched edge reports a gap.
    auto rule = [](const Point2& a, const Point2& b) {
        const bool on_box = (a.x == 0 && b.x == 0) || (a.y == 0 && b.y == 0) || (a.x == 2.1 && b.x == 2.1) ||
                            (a.y == 1 && b.y == 1);
        return on_box ? BoundaryLabel::dirichlet : BoundaryLabel::interior;
    };
    EXPECT_THROW(build_mesh({rect(0, 0, 1, 1), rect(1.1, 0, 2.1, 1)}, rule), MeshError);
}

TEST(AlignedGroup, SplitSide)
{
    Mesh m = build_mesh({rect(0, 0, 1, 1)});
    const int bottom = m.find_edge(vertex_at(m, {0, 0}), vertex_at(m, {1, 0}));
    const auto split = m.split_edge(bottom, {0.5, 0, 0});
    for (int half : split.edges) {
        const auto g = aligned_group(m, 0, half);
        EXPECT_EQ(g.count, 2);
        EXPECT_NEAR(g.total_length, 1.0, 1e-15);
    }
    const int left = m.find_edge(vertex_at(m, {0, 0}), vertex_at(m, {0, 1}));
    const auto g = aligned_group(m, 0, left);
    EXPECT_EQ(g.count, 1);
    EXPECT_NEAR(g.total_length, 1.0, 1e-15);

    const Polygon u = unify_aligned(m, 0);
    EXPECT_EQ(u.size(), 4u);
    EXPECT_EQ(remove_collinear_vertices(u).size(), 4u);
}

TEST(AlignedGroup, TriangleWithThreeBottomEdges)
{
    const double ell = 1.0, p = 0.9;
    Mesh m = build_mesh({Polygon{{{0, 0}, {ell, 0}, {0.5, 0.8}}}});
    int bottom = m.find_edge(vertex_at(m, {0, 0}), vertex_at(m, {ell, 0}));
    auto s1 = m.split_edge(bottom, {p * ell / 2, 0, 0});
    m.split_edge(s1.edges[1], {p * ell, 0, 0});
    const auto g = aligned_group(m, 0, s1.edges[0]);
    EXPECT_EQ(g.count, 3);
    EXPECT_NEAR(g.total_length, ell, 1e-15);
    EXPECT_EQ(unify_aligned(m, 0).size(), 3u);
    EXPECT_EQ(m.cell(0).polygon.size(), 5u);
}

TEST(SplitCell, SquareVertical)
{
    Mesh m = build_mesh({rect(0, 0, 1, 1)});
    // Loop is (0,0),(1,0),(1,1),(0,1): bottom edge 0, top edge 2.
    const auto s = m.split_cell(0, {0, 0.5}, {2, 0.5});
    EXPECT_FALSE(m.cell(0).active);
    EXPECT_EQ(m.active_cell_count(), 2u);
    EXPECT_EQ(s.split_edges.size(), 4u);
    for (int e : s.split_edges) {
        EXPECT_TRUE(m.edge(e).marked);
        EXPECT_EQ(m.edge(e).label, BoundaryLabel::dirichlet);
    }
    for (int c : {s.child1, s.child2}) {
        EXPECT_NEAR(m.cell(c).geometry.area, 0.5, 1e-15);
        EXPECT_EQ(m.cell(c).vertices.size(), 4u);
    }
    EXPECT_EQ(m.edge(s.chord_edge).cells.size(), 2u);
    EXPECT_EQ(m.edge(s.chord_edge).label, BoundaryLabel::interior);
    EXPECT_EQ(check_consistency(m), "");
}

TEST(SplitCell, SquareDiagonal)
{
    Mesh m = build_mesh({rect(0, 0, 1, 1)});
    const auto s = m.split_cell(0, {0, 0.0}, {2, 0.0});
    EXPECT_TRUE(s.split_edges.empty());
    for (int c : {s.child1, s.child2})
        EXPECT_EQ(m.cell(c).vertices.size(), 3u);
    for (int e : m.active_edges())
        EXPECT_FALSE(m.edge(e).marked);
    EXPECT_EQ(check_consistency(m), "");
}

TEST(SplitCell, NeighbourGainsAlignedPair)
{
    Mesh m = build_mesh({rect(0, 0, 1, 1), rect(1, 0, 2, 1)});
    // Left square loop (0,0),(1,0),(1,1),(0,1); chord from left edge (3) to shared edge (1).
    const auto s = m.split_cell(0, {3, 0.5}, {1, 0.5});
    const int right = 1;
    EXPECT_EQ(m.cell(right).vertices.size(), 5u);
    EXPECT_EQ(m.corner_positions(right).size(), 4u);
    const int mid = vertex_at(m, {1, 0.5});
    ASSERT_GE(mid, 0);
    for (int other : {vertex_at(m, {1, 0}), vertex_at(m, {1, 1})}) {
        const int e = m.find_edge(mid, other);
        ASSERT_GE(e, 0);
        EXPECT_EQ(m.edge(e).cells.size(), 2u);
        EXPECT_TRUE(m.edge(e).marked);
    }
    // Exhaustive incidence oracle.
    for (const auto& [key, cells] : incidence(m)) {
        const int e = m.find_edge(key.first, key.second);
        ASSERT_GE(e, 0);
        auto a = cells, b = m.edge(e).cells;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
    }
    EXPECT_EQ(check_consistency(m), "");
    EXPECT_GE(s.child1, 0);
}

TEST(SplitCell, DegenerateChordsRejected)
{
    Mesh m = build_mesh({rect(0, 0, 1, 1)});
    EXPECT_THROW(m.split_cell(0, {0, 0.0}, {1, 0.0}), MeshError); // existing edge
    EXPECT_THROW(m.split_cell(0, {0, 0.0}, {0, 0.0}), MeshError); // zero length
    EXPECT_THROW(m.split_cell(0, {0, 0.2}, {0, 0.7}), MeshError); // inside one edge
    EXPECT_THROW(m.split_cell(0, {0, 0.0}, {0, 0.5}), MeshError); // along a side
    EXPECT_EQ(m.active_cell_count(), 1u);
    EXPECT_EQ(check_consistency(m), "");
}

TEST(SplitCell, RandomSequencesKeepInvariants)
{
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    Mesh m = build_mesh({rect(-1, 0, 1, 1), rect(0, -1, 1, 0)});
    for (int step = 0; step < 300; ++step) {
        const auto act = m.active_cells();
        const int c = act[rng() % act.size()];
        const std::size_t n = m.cell(c).vertices.size();
        const std::size_t ia = rng() % n;
        std::size_t ib = (ia + 1 + rng() % (n - 1)) % n;
        const ChordEnd a{ia, (rng() % 2) ? 0.0 : u(rng)};
        const ChordEnd b{ib, (rng() % 2) ? 0.0 : u(rng)};
        try {
            const auto s = m.split_cell(c, a, b);
            for (int child : {s.child1, s.child2}) {
                EXPECT_TRUE(is_convex(m.cell(child).polygon));
                EXPECT_LE(m.cell(child).vertices.size(), n + 2);
            }
        } catch (const MeshError&) {
        }
        ASSERT_EQ(check_consistency(m), "") << "step " << step;
    }
    EXPECT_NEAR(m.total_active_area(), 3.0, 3e-9);
}

TEST(Describe, Quartiles)
{
    const auto d = describe({4, 1, 3, 2, 5});
    EXPECT_DOUBLE_EQ(d.min, 1);
    EXPECT_DOUBLE_EQ(d.q1, 2);
    EXPECT_DOUBLE_EQ(d.median, 3);
    EXPECT_DOUBLE_EQ(d.q3, 4);
    EXPECT_DOUBLE_EQ(d.max, 5);
    EXPECT_DOUBLE_EQ(d.mean, 3);
}

TEST(QualityReport, Categories)
{
    Mesh tri = build_mesh({Polygon{{{0, 0}, {1, 0}, {0, 1}}}, Polygon{{{1, 0}, {1, 1}, {0, 1}}}});
    auto rep = quality_report(tri, 4);
    EXPECT_DOUBLE_EQ(rep.r_tri, 1.0);
    EXPECT_DOUBLE_EQ(rep.r_quad, 0.0);
    EXPECT_DOUBLE_EQ(rep.r_poly, 0.0);
    EXPECT_DOUBLE_EQ(rep.ef_inv, 2.0);
    EXPECT_NEAR(rep.ar_rr_stats.median, std::sqrt(10.0), 1e-13);

    Mesh sq = build_mesh({rect(0, 0, 1, 1)});
    sq.split_edge(0, {0.5, 0, 0});
    rep = quality_report(sq, 5);
    EXPECT_EQ(rep.n_tri, 0u);
    EXPECT_EQ(rep.n_quad, 0u);
    EXPECT_EQ(rep.n_quad_al, 1u);
    EXPECT_EQ(rep.n_tri_al, 0u);
    EXPECT_NEAR(rep.r_tri + rep.r_quad + rep.r_poly, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(rep.max_aligned_ratio, 1.0);
    EXPECT_EQ(rep.max_vertices, 5);
}
