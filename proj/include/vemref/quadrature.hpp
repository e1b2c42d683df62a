#pragma once

#include "vemref/geometry.hpp"

#include <array>
#include <vector>

namespace vemref {

struct SegmentNode {
    double t;      // in [0, 1]
    double weight; // sums to 1
};

struct TriangleNode {
    std::array<double, 3> bary;
    double weight; // sums to 1/2, the reference-triangle area
};

struct QuadPoint {
    Point2 p;
    double weight;
};

/// Gauss-Legendre nodes on [0, 1] exact for polynomials of degree <= order.
std::vector<SegmentNode> gauss_segment(int order);

/// Interior Gauss-Legendre points (n of them) on [0, 1], ascending.
std::vector<double> gauss_points(int n);

/// Collapsed (Stroud conical product) rule on the reference triangle
/// (0,0), (1,0), (0,1), exact for polynomials of degree <= order. Weights are positive.
std::vector<TriangleNode> gauss_triangle(int order);

/// Physical quadrature over a convex polygon built from its fan triangulation.
std::vector<QuadPoint> polygon_quadrature(const Polygon& poly, int order);

/// Same, reusing an already computed centroid.
std::vector<QuadPoint> polygon_quadrature(const Polygon& poly, const Point2& centroid, int order);

} // namespace vemref
