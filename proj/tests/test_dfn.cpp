#include "vemref/adapt.hpp"
#include "vemref/dfn.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

using namespace vemref;

namespace {

Fracture square(int id, std::vector<Point3> vs)
{
    Fracture f;
    f.id = id;
    f.vertices = std::move(vs);
    return f;
}

FractureNetwork network(std::vector<Fracture> fr)
{
    FractureNetwork net;
    net.fractures = std::move(fr);
    prepare_network(net);
    return net;
}

FractureNetwork three_fractures()
{
    return load_network(std::string(VEMREF_DATA_DIR) + "/three_fracture.json");
}

std::map<int, double> area_by_fracture(const Mesh& m)
{
    std::map<int, double> a;
    for (int c : m.active_cells())
        a[m.cell(c).fracture] += m.cell(c).geometry.area;
    return a;
}

std::string error_of(const std::string& json)
{
    try {
        parse_network(json);
    } catch (const NetworkError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Traces, PerpendicularHalfCrossing)
{
    const auto net = network({square(0, {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}),
                              square(1, {{-1, 0, -1}, {0, 0, -1}, {0, 0, 1}, {-1, 0, 1}})});
    ASSERT_EQ(net.traces.size(), 1u);
    const Trace& t = net.traces[0];
    const Point3 lo = t.a.x < t.b.x ? t.a : t.b, hi = t.a.x < t.b.x ? t.b : t.a;
    EXPECT_NEAR(distance(lo, Point3{-1, 0, 0}), 0.0, 1e-14);
    EXPECT_NEAR(distance(hi, Point3{0, 0, 0}), 0.0, 1e-14);
    EXPECT_EQ(t.fractures, (std::array<int, 2>{0, 1}));
    for (int s = 0; s < 2; ++s) {
        const Frame& F = net.fractures[t.fractures[s]].frame;
        EXPECT_NEAR(distance(F.to_global(t.local[s][0]), t.a), 0.0, 1e-14);
        EXPECT_NEAR(distance(F.to_global(t.local[s][1]), t.b), 0.0, 1e-14);
    }
}

TEST(Traces, ParallelAndPointContactGiveNone)
{
    const auto parallel = network({square(0, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}),
                                   square(1, {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}})});
    EXPECT_TRUE(parallel.traces.empty());
    // Second square touches the first only at the corner (1, 1, 0).
    const auto touch = network({square(0, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}),
                                square(1, {{1, 1, 0}, {2, 2, 0.5}, {2, 2, 1.5}, {1, 1, 1}})});
    EXPECT_TRUE(touch.traces.empty());
    // Planes cross along x = 3, outside the first square.
    const auto apart = network({square(0, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}),
                                square(1, {{3, 0, -1}, {3, 1, -1}, {3, 1, 1}, {3, 0, 1}})});
    EXPECT_TRUE(apart.traces.empty());
}

TEST(Traces, CoplanarOverlapIsRejected)
{
    EXPECT_THROW(network({square(0, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}),
                          square(1, {{0.5, 0.5, 0}, {2, 0.5, 0}, {2, 2, 0}, {0.5, 2, 0}})}),
                 NetworkError);
    // Edge-adjacent coplanar squares are fine and share no trace.
    const auto side = network({square(0, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}),
                               square(1, {{1, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}})});
    EXPECT_TRUE(side.traces.empty());
}

TEST(Frame, CounterClockwiseAndOrthonormal)
{
    for (bool flip : {false, true}) {
        std::vector<Point3> vs{{0, 0, 0}, {1, 0, 1}, {1, 2, 1}, {0, 2, 0}};
        if (flip)
            std::reverse(vs.begin(), vs.end());
        const Frame f = fracture_frame(vs, 1e-12);
        EXPECT_NEAR(dot(f.u, f.v), 0.0, 1e-15);
        EXPECT_NEAR(norm(f.u), 1.0, 1e-15);
        EXPECT_NEAR(norm(f.normal), 1.0, 1e-15);
        Polygon p;
        for (const auto& v : vs)
            p.vertices.push_back(f.to_local(v));
        EXPECT_NEAR(signed_area(p.vertices), 2.0 * std::sqrt(2.0), 1e-14);
    }
}

TEST(Network, NonPlanarFractureNamesTheVertex)
{
    const std::string msg = error_of(R"({"fractures": [
        {"vertices": [[0,0,0],[1,0,0],[1,1,0],[0,1,0.1]]}]})");
    EXPECT_NE(msg.find("vertex 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("fracture 0"), std::string::npos) << msg;
}

TEST(Network, MalformedFileReportsLine)
{
    const std::string msg = error_of("{\n  \"fractures\": [\n    {\"vertices\": [[0,0,0] [1,0,0]]}\n  ]\n}\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(error_of(R"({"fractures": [{"vertices": [[0,0],[1,0,0],[1,1,0]]}]})").find("vertices[0]"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"fractures": [{"vertices": [[0,0,0],[1,0,0],[1,1,0]], "solution": "x +"}]})")
                  .find("solution"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"fractures": [{"vertices": [[0,0,0],[1,0,0],[1,1,0]],
                           "boundary": [{"where": "x < 0", "type": "neumann"}]}]})")
                  .find("boundary[0]"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"fractures": []})").find("no fractures"), std::string::npos);
}

TEST(MinimalMesh, SingleFractureIsOneCell)
{
    auto net = network({square(0, {{0, 0, 0}, {2, 0, 1}, {2, 1, 1}, {0, 1, 0}})});
    net.fractures[0].boundary.push_back({0, 2.0, BoundaryLabel::neumann});
    const Mesh m = build_minimal_dfn_mesh(net);
    EXPECT_EQ(m.active_cell_count(), 1u);
    int neumann = 0;
    for (int e : m.active_edges())
        neumann += m.edge(e).label == BoundaryLabel::neumann;
    EXPECT_EQ(neumann, 1);
    EXPECT_EQ(check_conformity(m, net), "");
}

TEST(MinimalMesh, TwoCrossingSquaresGiveFourCells)
{
    const auto net = network({square(0, {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}),
                              square(1, {{-1, 0, -1}, {1, 0, -1}, {1, 0, 1}, {-1, 0, 1}})});
    ASSERT_EQ(net.traces.size(), 1u);
    const Mesh m = build_minimal_dfn_mesh(net);
    EXPECT_EQ(m.active_cell_count(), 4u);
    EXPECT_EQ(check_consistency(m), "");
    EXPECT_EQ(check_conformity(m, net), "");
    int trace_edges = 0;
    for (int e : m.active_edges())
        if (m.edge(e).trace_id == 0) {
            ++trace_edges;
            EXPECT_EQ(m.edge(e).cells.size(), 4u);
            EXPECT_EQ(m.edge(e).label, BoundaryLabel::interior);
        }
    EXPECT_EQ(trace_edges, 1);
}

TEST(MinimalMesh, ThreeFractureNetwork)
{
    const auto net = three_fractures();
    ASSERT_EQ(net.fractures.size(), 3u);
    ASSERT_EQ(net.traces.size(), 3u);
    const Mesh m = build_minimal_dfn_mesh(net);
    EXPECT_EQ(check_consistency(m), "");
    EXPECT_EQ(check_conformity(m, net), "");
    for (int c : m.active_cells())
        EXPECT_TRUE(is_convex(m.cell(c).polygon));
    const auto area = area_by_fracture(m);
    EXPECT_NEAR(area.at(0), 4.0, 1e-12);
    EXPECT_NEAR(area.at(1), 2.0, 1e-12);
    EXPECT_NEAR(area.at(2), 4.0, 1e-12);
    // F1 is a single convex cell, so the y = 0 tip extends across all of it.
    std::map<int, int> count;
    for (int c : m.active_cells())
        ++count[m.cell(c).fracture];
    EXPECT_EQ(count[0], 4);
    EXPECT_EQ(count[1], 4);
    EXPECT_EQ(count[2], 4);
    for (int e : m.active_edges())
        if (m.edge(e).cells.size() == 1)
            EXPECT_EQ(m.edge(e).label, BoundaryLabel::dirichlet);
}

TEST(Manufactured, SourceIsMinusKLaplacian)
{
    auto net = three_fractures();
    net.fractures[2].K = 2.5;
    const Problem pr = manufactured_problem(net);
    ASSERT_EQ(pr.exact.size(), 3u);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> d(0.05, 0.95);
    const double h = 1e-3;
    const Fracture& f = net.fractures[2];
    const Polygon poly = f.local_polygon();
    double lo_u = 1e9, hi_u = -1e9, lo_v = 1e9, hi_v = -1e9;
    for (const auto& p : poly.vertices) {
        lo_u = std::min(lo_u, p.x), hi_u = std::max(hi_u, p.x);
        lo_v = std::min(lo_v, p.y), hi_v = std::max(hi_v, p.y);
    }
    const auto& g = pr.fractures[2].dirichlet;
    for (int i = 0; i < 100; ++i) {
        const Point2 p{lo_u + d(rng) * (hi_u - lo_u), lo_v + d(rng) * (hi_v - lo_v)};
        const double lap = (g({p.x + h, p.y}) + g({p.x - h, p.y}) + g({p.x, p.y + h}) + g({p.x, p.y - h}) - 4 * g(p)) /
                           (h * h);
        EXPECT_NEAR(pr.fractures[2].source(p), -2.5 * lap, 1e-6);
        const Vec2 gr = pr.exact[2].grad(p);
        const double s = 1e-5;
        EXPECT_NEAR(gr.x, (g({p.x + s, p.y}) - g({p.x - s, p.y})) / (2 * s), 1e-8);
        EXPECT_NEAR(gr.y, (g({p.x, p.y + s}) - g({p.x, p.y - s})) / (2 * s), 1e-8);
    }
}

TEST(Manufactured, ExactSolutionIsContinuousAcrossTraces)
{
    const auto net = three_fractures();
    const Problem pr = manufactured_problem(net);
    for (const auto& t : net.traces)
        for (double s : {0.1, 0.37, 0.5, 0.81}) {
            const Point3 p = t.a + s * (t.b - t.a);
            const int f0 = t.fractures[0], f1 = t.fractures[1];
            EXPECT_NEAR(pr.exact[f0].u(net.fractures[f0].frame.to_local(p)),
                        pr.exact[f1].u(net.fractures[f1].frame.to_local(p)), 1e-14);
        }
}

TEST(DfnAdaptive, ShortRunStaysConformingAndConverges)
{
    const auto net = three_fractures();
    Mesh m = build_minimal_dfn_mesh(net);
    const Problem pr = manufactured_problem(net);
    AdaptiveConfig cfg;
    cfg.k = 2;
    cfg.dof_budget = 1500;
    const auto recs = run_adaptive(m, pr, cfg, [&](const IterationState& s) {
        EXPECT_EQ(check_consistency(s.mesh), "");
        EXPECT_EQ(check_conformity(s.mesh, net), "");
    });
    ASSERT_GE(recs.size(), 4u);
    EXPECT_LT(recs.back().error_rel, recs.front().error_rel);
    EXPECT_LT(recs.back().eta_rel, recs.front().eta_rel);
    const auto area = area_by_fracture(m);
    EXPECT_NEAR(area.at(0) + area.at(1) + area.at(2), 10.0, 1e-11);
}
