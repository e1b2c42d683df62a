#pragma once

#include "vemref/mesh.hpp"

#include <array>
#include <vector>

namespace vemref {

struct RefinementParams {
    double c_rho = 1.5;
    double c_al = 1.0;
};

/// Cut line through a cell. For triangles cut by newest-vertex bisection,
/// `apex` and `target` are the two chord ends (apex = newest vertex,
/// target = midpoint of the opposite side).
struct CutLine {
    Point2 point;
    Vec2 dir;
    bool nvb = false;
    Point2 apex;
    Point2 target;
};

/// Max-momentum direction of a polygon without aligned edges. `newest` is the
/// position of the newest vertex in `e_hat`, or -1 when unknown (NVB seeding
/// then uses the vertex opposite the longest edge).
CutLine max_momentum(const Polygon& e_hat, int newest = -1);

/// Relative slack applied to both quality comparisons so that configurations
/// lying exactly on a threshold do not depend on rounding.
inline constexpr double quality_slack = 1e-9;

bool check_quality(const Mesh& mesh, int cell, int edge, int s, const RefinementParams& params);

struct Chord {
    ChordEnd a;
    ChordEnd b;
    bool nvb = false; // a = newest vertex, b = midpoint of the opposite side
};

/// Chord endpoints on the actual loop of `cell` for the given cut line.
Chord smooth_direction(const Mesh& mesh, int cell, const CutLine& cut, const RefinementParams& params);

struct SplitRecord {
    int cell = -1;
    int child1 = -1;
    int child2 = -1;
    Point2 a, b;
    bool nvb = false;
    bool extension = false;
    std::size_t parent_vertices = 0;              // N_E at split time
    std::array<std::size_t, 2> child_vertices{}; // right after the split
};

struct RefineOutcome {
    std::vector<int> refined;   // T^Ref, in split order
    std::vector<int> to_refine; // T^ToRef
    std::vector<int> extended;  // cells split because of extension
    std::vector<SplitRecord> splits;
    bool truncated = false;     // the extension guard stopped the worklist
};

RefineOutcome refine(Mesh& mesh, const std::vector<int>& marked, const RefinementParams& params);

} // namespace vemref
