#include "vemref/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace vemref {

double signed_area(std::span<const Point2> pts)
{
    const std::size_t n = pts.size();
    if (n < 3)
        return 0.0;
    const Point2 o = pts[0];
    double a = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        a += cross(pts[i] - o, pts[i + 1] - o);
    return 0.5 * a;
}

double polygon_diameter(const Polygon& poly)
{
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, distance(poly[i], poly[j]));
    return d;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b)
{
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0)
        return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

CellGeometry compute_cell_geometry(const Polygon& poly)
{
    const std::size_t n = poly.size();
    if (n < 3)
        throw GeometryError("polygon needs at least three vertices");

    CellGeometry g;
    g.n = static_cast<int>(n);
    g.diameter = polygon_diameter(poly);

    // Moments are accumulated relative to the vertex average to limit cancellation.
    Point2 ref;
    for (const auto& p : poly.vertices)
        ref += p;
    ref = ref / static_cast<double>(n);

    double area2 = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i] - ref;
        const Point2 b = poly.next(i) - ref;
        const double c = cross(a, b);
        area2 += c;
        sx += (a.x + b.x) * c;
        sy += (a.y + b.y) * c;
        sxx += (a.x * a.x + a.x * b.x + b.x * b.x) * c;
        syy += (a.y * a.y + a.y * b.y + b.y * b.y) * c;
        sxy += (a.x * b.y + 2.0 * a.x * a.y + 2.0 * b.x * b.y + b.x * a.y) * c;
    }
    g.area = 0.5 * area2;
    if (!(g.area > tol::area_rel * g.diameter * g.diameter))
        throw GeometryError("degenerate polygon (area " + std::to_string(g.area) + ")");

    const double cx = sx / (6.0 * g.area);
    const double cy = sy / (6.0 * g.area);
    const double ixx = sxx / 12.0 - g.area * cx * cx; // int (x - xc)^2
    const double iyy = syy / 12.0 - g.area * cy * cy; // int (y - yc)^2
    const double ixy = sxy / 24.0 - g.area * cx * cy; // int (x - xc)(y - yc)
    g.centroid = ref + Point2{cx, cy};
    g.inertia = {iyy, -ixy, ixx};

    g.r = std::numeric_limits<double>::infinity();
    g.h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double len = distance(poly[i], poly.next(i));
        g.h = std::min(g.h, len);
        g.H = std::max(g.H, len);
        g.perimeter += len;
        g.r = std::min(g.r, point_segment_distance(g.centroid, poly[i], poly.next(i)));
        g.R = std::max(g.R, distance(g.centroid, poly[i]));
    }
    return g;
}

bool are_collinear(const Point2& a, const Point2& b, const Point2& c, double tol_col)
{
    const double lab = distance(a, b);
    const double scale = std::max(lab, distance(b, c));
    if (lab == 0.0)
        return true;
    const double dist = std::abs(cross(b - a, c - a)) / lab;
    return dist <= tol_col * scale;
}

bool is_convex(const Polygon& poly, double tol_col)
{
    const std::size_t n = poly.size();
    if (n < 3 || signed_area(poly.vertices) <= 0.0)
        return false;
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = poly[i] - poly[(i + n - 1) % n];
        const Vec2 e1 = poly.next(i) - poly[i];
        const double c = cross(e0, e1);
        if (c < -tol_col * norm(e0) * norm(e1))
            return false;
        turning += std::atan2(c, dot(e0, e1));
    }
    return std::abs(turning - 2.0 * std::numbers::pi) < 1e-6;
}

PrincipalAxes principal_axes(const Tensor2& t)
{
    PrincipalAxes p;
    const double mean = 0.5 * (t.xx + t.yy);
    const double rad = std::hypot(0.5 * (t.xx - t.yy), t.xy);
    p.lambda_max = mean + rad;
    p.lambda_min = mean - rad;
    const double theta = 0.5 * std::atan2(2.0 * t.xy, t.xx - t.yy);
    p.v_max = {std::cos(theta), std::sin(theta)};
    p.tie = (p.lambda_max - p.lambda_min) < tol::eigengap_rel * std::abs(t.trace());
    return p;
}

std::array<LineHit, 2> line_polygon_intersection(const Polygon& poly, const Point2& origin, const Vec2& dir_in)
{
    const std::size_t n = poly.size();
    if (!is_convex(poly))
        throw GeometryError("line_polygon_intersection: polygon is not convex");
    const double dlen = norm(dir_in);
    if (dlen == 0.0)
        throw GeometryError("line_polygon_intersection: zero direction");
    const Vec2 dir = dir_in / dlen;
    const double tol_len = tol::length_rel * polygon_diameter(poly);

    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = poly.next(i) - poly[i];
        if (cross(e, origin - poly[i]) <= tol_len * norm(e))
            throw GeometryError("line_polygon_intersection: origin not strictly inside polygon");
    }

    std::vector<double> s(n);
    std::vector<bool> on(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = cross(dir, poly[i] - origin);
        on[i] = std::abs(s[i]) <= tol_len;
    }

    struct Candidate {
        LineHit hit;
        double along;
    };
    std::vector<Candidate> cands;
    auto add_vertex = [&](std::size_t v) {
        for (const auto& c : cands)
            if (c.hit.on_vertex() && c.hit.edge == v)
                return;
        cands.push_back({{v, 0.0, poly[v]}, dot(poly[v] - origin, dir)});
    };
    for (std::size_t i = 0; i < n; ++i)
        if (on[i])
            add_vertex(i);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if (on[i] || on[j] || (s[i] > 0.0) == (s[j] > 0.0))
            continue;
        const double t = s[i] / (s[i] - s[j]);
        const double len = distance(poly[i], poly[j]);
        if (t * len <= tol_len) {
            add_vertex(i);
        } else if ((1.0 - t) * len <= tol_len) {
            add_vertex(j);
        } else {
            const Point2 p = poly[i] + t * (poly[j] - poly[i]);
            cands.push_back({{i, t, p}, dot(p - origin, dir)});
        }
    }
    if (cands.size() < 2)
        throw GeometryError("line_polygon_intersection: fewer than two boundary hits");
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.along < b.along; });
    if (!(cands.front().along < 0.0 && cands.back().along > 0.0))
        throw GeometryError("line_polygon_intersection: hits do not straddle origin");
    return {cands.front().hit, cands.back().hit};
}

std::vector<Triangle> fan_triangulate(const Polygon& poly)
{
    if (!is_convex(poly))
        throw GeometryError("fan_triangulate: polygon is not convex");
    const Point2 c = compute_cell_geometry(poly).centroid;
    std::vector<Triangle> tris;
    tris.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i)
        tris.push_back({{c, poly[i], poly.next(i)}});
    return tris;
}

Polygon remove_collinear_vertices(const Polygon& poly, double tol_col)
{
    const std::size_t n = poly.size();
    Polygon out;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& prev = poly[(i + n - 1) % n];
        if (!are_collinear(prev, poly[i], poly.next(i), tol_col))
            out.vertices.push_back(poly[i]);
    }
    return out;
}

namespace {

void decompose(const Polygon& poly, double tol_col, std::vector<Polygon>& out, int depth)
{
    const std::size_t n = poly.size();
    if (depth > 64)
        throw GeometryError("convex decomposition did not terminate");
    std::size_t reflex = n;
    for (std::size_t i = 0; i < n && reflex == n; ++i) {
        const Point2& prev = poly[(i + n - 1) % n];
        if (cross(poly[i] - prev, poly.next(i) - poly[i]) < 0.0 && !are_collinear(prev, poly[i], poly.next(i), tol_col))
            reflex = i;
    }
    if (reflex == n) {
        out.push_back(poly);
        return;
    }
    const Point2 o = poly[reflex];
    const Vec2 d = o - poly[(reflex + n - 1) % n];
    double best = std::numeric_limits<double>::infinity();
    std::size_t hit_edge = n;
    double hit_t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == reflex || (j + 1) % n == reflex)
            continue;
        const Point2 a = poly[j], b = poly.next(j);
        const Vec2 e = b - a;
        const double den = cross(d, e);
        if (std::abs(den) < 1e-300)
            continue;
        const double s = cross(a - o, e) / den;
        const double t = cross(a - o, d) / den;
        if (s > 1e-12 && t >= -1e-12 && t <= 1.0 + 1e-12 && s < best) {
            best = s;
            hit_edge = j;
            hit_t = std::clamp(t, 0.0, 1.0);
        }
    }
    if (hit_edge == n)
        throw GeometryError("convex decomposition: no boundary hit from reflex vertex");
    const Point2 p = poly[hit_edge] + hit_t * (poly.next(hit_edge) - poly[hit_edge]);
    Polygon a, b;
    // a: o .. poly[hit_edge], p ; b: p, poly[hit_edge + 1] .. o
    for (std::size_t i = reflex;; i = (i + 1) % n) {
        a.vertices.push_back(poly[i]);
        if (i == hit_edge)
            break;
    }
    a.vertices.push_back(p);
    b.vertices.push_back(p);
    for (std::size_t i = (hit_edge + 1) % n;; i = (i + 1) % n) {
        b.vertices.push_back(poly[i]);
        if (i == reflex)
            break;
    }
    for (Polygon* q : {&a, &b}) {
        Polygon c;
        for (const Point2& v : q->vertices)
            if (c.vertices.empty() || distance(c.vertices.back(), v) > 1e-14)
                c.vertices.push_back(v);
        if (c.size() > 1 && distance(c.vertices.front(), c.vertices.back()) <= 1e-14)
            c.vertices.pop_back();
        decompose(remove_collinear_vertices(c, tol_col), tol_col, out, depth + 1);
    }
}

} // namespace

std::vector<Polygon> convex_decomposition(const Polygon& poly, double tol_col)
{
    std::vector<Polygon> out;
    decompose(remove_collinear_vertices(poly, tol_col), tol_col, out, 0);
    return out;
}

} // namespace vemref
