#include "vemref/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace vemref {

namespace {

constexpr int max_order = 60;

// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
std::vector<std::pair<double, double>> legendre_rule(int n)
{
    std::vector<std::pair<double, double>> rule(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = {-x, w};
        rule[n - 1 - i] = {x, w};
    }
    if (n % 2 == 1)
        rule[n / 2].first = 0.0;
    return rule;
}

const std::vector<std::pair<double, double>>& cached_legendre(int n)
{
    static std::mutex mtx;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, legendre_rule(n)).first;
    return it->second;
}

} // namespace

std::vector<SegmentNode> gauss_segment(int order)
{
    if (order < 1 || order > max_order)
        throw std::invalid_argument("gauss_segment: unsupported order " + std::to_string(order));
    const int n = (order + 2) / 2; // 2n - 1 >= order
    std::vector<SegmentNode> nodes;
    nodes.reserve(n);
    for (const auto& [x, w] : cached_legendre(n))
        nodes.push_back({0.5 * (x + 1.0), 0.5 * w});
    return nodes;
}

std::vector<double> gauss_points(int n)
{
    std::vector<double> t;
    if (n <= 0)
        return t;
    for (const auto& [x, w] : cached_legendre(n))
        t.push_back(0.5 * (x + 1.0));
    return t;
}

std::vector<TriangleNode> gauss_triangle(int order)
{
    if (order < 1 || order > max_order)
        throw std::invalid_argument("gauss_triangle: unsupported order " + std::to_string(order));
    // Collapsed coordinates: x = a, y = b (1 - a), Jacobian (1 - a). The
    // integrand has degree order + 1 in a and order in b.
    const int n = (order + 3) / 2;
    const auto& rule = cached_legendre(n);
    std::vector<TriangleNode> nodes;
    nodes.reserve(n * n);
    for (const auto& [xa, wa] : rule) {
        const double a = 0.5 * (xa + 1.0);
        for (const auto& [xb, wb] : rule) {
            const double b = 0.5 * (xb + 1.0);
            const double x = a;
            const double y = b * (1.0 - a);
            nodes.push_back({{1.0 - x - y, x, y}, 0.25 * wa * wb * (1.0 - a)});
        }
    }
    return nodes;
}

std::vector<QuadPoint> polygon_quadrature(const Polygon& poly, const Point2& c, int order)
{
    const auto ref = gauss_triangle(order);
    std::vector<QuadPoint> pts;
    pts.reserve(ref.size() * poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly.next(i);
        const double jac = cross(a - c, b - c); // twice the sub-triangle area
        for (const auto& nd : ref) {
            const Point2 p = nd.bary[0] * c + nd.bary[1] * a + nd.bary[2] * b;
            pts.push_back({p, nd.weight * jac});
        }
    }
    return pts;
}

std::vector<QuadPoint> polygon_quadrature(const Polygon& poly, int order)
{
    if (!is_convex(poly))
        throw GeometryError("polygon_quadrature: polygon is not convex");
    return polygon_quadrature(poly, compute_cell_geometry(poly).centroid, order);
}

} // namespace vemref
