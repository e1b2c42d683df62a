#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vemref {

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
    Point2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
    friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
    friend Point2 operator*(Point2 a, double s) { return a *= s; }
    friend Point2 operator*(double s, Point2 a) { return a *= s; }
    friend Point2 operator/(Point2 a, double s) { return a *= (1.0 / s); }
    friend bool operator==(const Point2&, const Point2&) = default;
};

using Vec2 = Point2;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3& operator+=(const Point3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Point3& operator-=(const Point3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Point3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    friend Point3 operator+(Point3 a, const Point3& b) { return a += b; }
    friend Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
    friend Point3 operator*(Point3 a, double s) { return a *= s; }
    friend Point3 operator*(double s, Point3 a) { return a *= s; }
    friend bool operator==(const Point3&, const Point3&) = default;
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(b - a); }
inline Point2 perp(const Point2& a) { return {-a.y, a.x}; }

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point3& a, const Point3& b) { return norm(b - a); }

/// Counter-clockwise vertex loop. Most operations additionally require
/// convexity; collinear (aligned) vertices are allowed.
struct Polygon {
    std::vector<Point2> vertices;

    std::size_t size() const { return vertices.size(); }
    const Point2& operator[](std::size_t i) const { return vertices[i]; }
    const Point2& next(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }
};

/// Symmetric 2x2 tensor.
struct Tensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double trace() const { return xx + yy; }
    double det() const { return xx * yy - xy * xy; }
};

/// Cached per-cell geometric quantities. `inertia` is the rotational inertia
/// tensor about the centroid: [[Iyy, -Ixy], [-Ixy, Ixx]] with
/// Ixx = int (x-xc)^2, Iyy = int (y-yc)^2, Ixy = int (x-xc)(y-yc).
struct CellGeometry {
    Point2 centroid;
    double area = 0.0;
    Tensor2 inertia;
    double r = 0.0;        // min distance centroid -> edges
    double R = 0.0;        // max distance centroid -> vertices
    double h = 0.0;        // shortest edge
    double H = 0.0;        // longest edge
    double diameter = 0.0;
    int n = 0;             // vertex / edge count
    double perimeter = 0.0;
};

namespace tol {
inline constexpr double length_rel = 1e-9;   // tol_len = length_rel * D_E
inline constexpr double collinear = 1e-9;    // tol_col
inline constexpr double area_rel = 1e-12;    // tol_area = area_rel * D_E^2
inline constexpr double eigengap_rel = 1e-8; // tie threshold relative to trace
} // namespace tol

double signed_area(std::span<const Point2> pts);
double polygon_diameter(const Polygon& poly);
double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

/// Throws GeometryError for fewer than three vertices or area <= tol_area.
CellGeometry compute_cell_geometry(const Polygon& poly);

/// True iff the distance of c from line(a, b) is at most tol_col * max(|ab|, |bc|).
bool are_collinear(const Point2& a, const Point2& b, const Point2& c, double tol_col = tol::collinear);

/// Convexity of a CCW loop, tolerating collinear vertices.
bool is_convex(const Polygon& poly, double tol_col = tol::collinear);

struct PrincipalAxes {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    Vec2 v_max;        // unit eigenvector of lambda_max
    bool tie = false;  // eigengap below eigengap_rel * trace
};

PrincipalAxes principal_axes(const Tensor2& t);

/// One boundary crossing of a line with a polygon. `edge` is the loop index
/// of the crossed edge (from vertex `edge` to vertex `edge + 1`) and `t` the
/// parameter along it; vertex hits are reported with t snapped to 0 or 1.
struct LineHit {
    std::size_t edge = 0;
    double t = 0.0;
    Point2 point;

    bool on_vertex() const { return t == 0.0 || t == 1.0; }
    std::size_t vertex(std::size_t n) const { return t == 0.0 ? edge : (edge + 1) % n; }
};

/// Both boundary hits of the line `origin + s * dir` through a convex polygon,
/// ordered along `dir`. `origin` must lie strictly inside.
std::array<LineHit, 2> line_polygon_intersection(const Polygon& poly, const Point2& origin, const Vec2& dir);

struct Triangle {
    std::array<Point2, 3> v;

    double area() const { return 0.5 * cross(v[1] - v[0], v[2] - v[0]); }
};

/// Triangles joining the centroid to each edge. Rejects non-convex input.
std::vector<Triangle> fan_triangulate(const Polygon& poly);

/// Polygon with every vertex removed whose neighbours are collinear with it.
Polygon remove_collinear_vertices(const Polygon& poly, double tol_col = tol::collinear);

/// Splits a simple CCW polygon into convex pieces by extending the incoming
/// edge of each reflex vertex to the boundary. Convex input is returned as is
/// (minus collinear vertices).
std::vector<Polygon> convex_decomposition(const Polygon& poly, double tol_col = tol::collinear);

} // namespace vemref
