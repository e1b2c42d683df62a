#pragma once

// Test fixtures shared by unit and acceptance suites.

#include "vemref/mesh.hpp"
#include "vemref/vem.hpp"

#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace fixtures {

using namespace vemref;

inline Polygon rect(double x0, double y0, double x1, double y1)
{
    return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

inline Polygon clip_halfplane(const Polygon& p, const Point2& a, const Vec2& n, double c)
{
    // Keeps {x : dot(n, x) <= c}.
    Polygon out;
    const std::size_t m = p.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 s = p[i], e = p.next(i);
        const double ds = dot(n, s) - c, de = dot(n, e) - c;
        if (ds <= 0)
            out.vertices.push_back(s);
        if ((ds < 0 && de > 0) || (ds > 0 && de < 0))
            out.vertices.push_back(s + (ds / (ds - de)) * (e - s));
    }
    (void)a;
    return out;
}

/// Voronoi tessellation of [x0,x1]x[y0,y1] from jittered grid seeds.
inline std::vector<Polygon> voronoi_cells(int nx, int ny, unsigned seed, double x0 = 0, double y0 = 0, double x1 = 1,
                                          double y1 = 1)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::vector<Point2> seeds;
    const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            seeds.push_back({x0 + (i + 0.5 + jitter(rng)) * hx, y0 + (j + 0.5 + jitter(rng)) * hy});
    std::vector<Polygon> cells;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        Polygon p = rect(x0, y0, x1, y1);
        for (std::size_t t = 0; t < seeds.size(); ++t) {
            if (t == s)
                continue;
            const Vec2 n = seeds[t] - seeds[s];
            const Point2 mid = 0.5 * (seeds[s] + seeds[t]);
            p = clip_halfplane(p, mid, n, dot(n, mid));
        }
        cells.push_back(remove_collinear_vertices(p, 1e-12));
    }
    return cells;
}

/// Bivariate polynomial sum c_ab x^a y^b in global (local-frame) coordinates.
struct Poly {
    std::map<std::pair<int, int>, double> c;

    double operator()(const Point2& p) const
    {
        double s = 0;
        for (const auto& [e, v] : c)
            s += v * std::pow(p.x, e.first) * std::pow(p.y, e.second);
        return s;
    }
    Vec2 grad(const Point2& p) const
    {
        Vec2 g;
        for (const auto& [e, v] : c) {
            const auto [a, b] = e;
            if (a > 0)
                g.x += v * a * std::pow(p.x, a - 1) * std::pow(p.y, b);
            if (b > 0)
                g.y += v * b * std::pow(p.x, a) * std::pow(p.y, b - 1);
        }
        return g;
    }
    double laplacian(const Point2& p) const
    {
        double s = 0;
        for (const auto& [e, v] : c) {
            const auto [a, b] = e;
            if (a > 1)
                s += v * a * (a - 1) * std::pow(p.x, a - 2) * std::pow(p.y, b);
            if (b > 1)
                s += v * b * (b - 1) * std::pow(p.x, a) * std::pow(p.y, b - 2);
        }
        return s;
    }
};

inline Poly random_poly(int degree, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly p;
    for (int d = 0; d <= degree; ++d)
        for (int b = 0; b <= d; ++b)
            p.c[{d - b, b}] = u(rng);
    return p;
}

/// Dirichlet problem with exact solution p on fracture 0.
inline Problem poly_problem(const Poly& p, double K = 1.0)
{
    Problem pr;
    FractureData f;
    f.K = K;
    f.source = [p, K](const Point2& x) { return -K * p.laplacian(x); };
    f.dirichlet = [p](const Point2& x) { return p(x); };
    pr.fractures.push_back(f);
    pr.exact.push_back({[p](const Point2& x) { return p(x); }, [p](const Point2& x) { return p.grad(x); }});
    return pr;
}

/// Unit square tiled by 2x2 squares, one of which is bisected so its neighbours carry aligned edges.
inline Mesh aligned_mesh()
{
    Mesh m = build_mesh({rect(0, 0, 0.5, 0.5), rect(0.5, 0, 1, 0.5), rect(0, 0.5, 0.5, 1), rect(0.5, 0.5, 1, 1)});
    m.split_cell(0, {0, 0.5}, {2, 0.5});
    m.split_cell(3, {1, 0.3}, {3, 0.6});
    return m;
}

} // namespace fixtures
