#pragma once

#include "vemref/geometry.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace vemref {

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BoundaryLabel { interior, dirichlet, neumann };

/// Orthonormal in-plane frame of a fracture. The 2D problem uses the
/// identity frame (u = x, v = y).
struct Frame {
    Point3 origin;
    Point3 u{1.0, 0.0, 0.0};
    Point3 v{0.0, 1.0, 0.0};
    Point3 normal{0.0, 0.0, 1.0};

    Point2 to_local(const Point3& p) const
    {
        const Point3 d = p - origin;
        return {dot(d, u), dot(d, v)};
    }
    Point3 to_global(const Point2& q) const { return origin + q.x * u + q.y * v; }
};

struct Vertex {
    Point3 position;
};

struct MeshEdge {
    std::array<int, 2> vertices{-1, -1};
    std::vector<int> cells; // N_e: may exceed two only on traces
    bool marked = false;
    BoundaryLabel label = BoundaryLabel::interior;
    int trace_id = -1;
    bool active = true;
};

struct MeshCell {
    std::vector<int> vertices; // CCW in the fracture frame
    std::vector<int> edges;    // edges[i] joins vertices[i] and vertices[i + 1]
    int fracture = 0;
    bool active = true;
    int newest_vertex = -1; // NVB record (vertex id), -1 when unknown
    int parent = -1;
    Polygon polygon; // local coordinates of `vertices`
    CellGeometry geometry;
};

/// Maximal run of contiguous collinear edges of one cell.
struct AlignedGroup {
    int cell = -1;
    std::vector<int> edges; // in loop order
    double total_length = 0.0;
    int count = 0;
};

/// Endpoint of a chord on a cell boundary, relative to the cell loop.
/// t == 0 selects vertex `loop_index`; 0 < t < 1 a point inside edge `loop_index`.
struct ChordEnd {
    std::size_t loop_index = 0;
    double t = 0.0;

    bool on_vertex() const { return t == 0.0; }
};

struct EdgeSplit {
    int vertex = -1;
    std::array<int, 2> edges{-1, -1}; // from old vertices[0] side, then vertices[1] side
};

struct CellSplit {
    int child1 = -1;
    int child2 = -1;
    int chord_edge = -1;
    std::vector<int> split_edges; // sub-edges created where the chord crossed an edge interior
};

class Mesh {
public:
    int add_fracture(const Frame& frame);
    int fracture_count() const { return static_cast<int>(frames_.size()); }
    const Frame& frame(int fracture) const { return frames_.at(fracture); }

    int add_vertex(const Point3& p);
    int add_vertex(int fracture, const Point2& p) { return add_vertex(frames_.at(fracture).to_global(p)); }

    /// Adds a cell from a CCW vertex loop; edges are reused when an active
    /// edge with the same endpoints exists. Throws MeshError on overlap.
    int add_cell(int fracture, const std::vector<int>& loop, bool allow_shared_orientation = false);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t cell_count() const { return cells_.size(); }
    const Vertex& vertex(int v) const { return vertices_.at(v); }
    const MeshEdge& edge(int e) const { return edges_.at(e); }
    MeshEdge& edge(int e) { return edges_.at(e); }
    const MeshCell& cell(int c) const { return cells_.at(c); }
    void set_newest_vertex(int c, int v) { cells_.at(c).newest_vertex = v; }

    std::vector<int> active_cells() const;
    std::vector<int> active_edges() const;
    std::size_t active_cell_count() const;

    Point2 local_point(int vertex, int fracture) const { return frames_.at(fracture).to_local(vertices_.at(vertex).position); }
    double edge_length(int e) const;
    /// Active edge joining v0 and v1 (either orientation), or -1.
    int find_edge(int v0, int v1) const;
    /// Position of `edge` in the loop of `cell`; throws when absent.
    std::size_t loop_position(int cell, int edge) const;
    /// True when the cell traverses the edge from vertices[0] to vertices[1].
    bool traverses_forward(int cell, std::size_t loop_pos) const;

    /// Inserts a vertex into edge `e`. Every incident cell gets the two
    /// sub-edges in place of `e` (aligned edges), which inherit the label,
    /// trace id and neighbour set of `e`.
    EdgeSplit split_edge(int e, const Point3& position);

    /// Bisects a convex cell along the chord a-b. The parent is deactivated and
    /// two children share the new chord edge. Edge interiors crossed by the
    /// chord are split and the resulting sub-edges marked.
    CellSplit split_cell(int cell, ChordEnd a, ChordEnd b, int chord_trace_id = -1);
    /// The validation split_cell performs, without mutating; throws MeshError.
    void validate_chord(int cell, ChordEnd a, ChordEnd b) const;
    bool chord_is_valid(int cell, ChordEnd a, ChordEnd b) const;
    /// Boundary point of a chord end in fracture-local coordinates.
    Point2 chord_point(int cell, ChordEnd end) const;

    /// Redirects every reference to vertex `from` to vertex `to`.
    void merge_vertex(int from, int to);
    /// Fuses two active edges with identical endpoints into `keep`.
    void merge_edge(int keep, int drop);

    void refresh_cell(int c);
    double total_active_area() const;

    /// Loop positions of the corners of the unified polygon.
    std::vector<std::size_t> corner_positions(int cell) const;

private:
    static std::uint64_t edge_key(int a, int b);
    int create_edge(int v0, int v1);
    void replace_in_loop(int cell, int old_edge, const EdgeSplit& split);

    std::vector<Frame> frames_;
    std::vector<Vertex> vertices_;
    std::vector<MeshEdge> edges_;
    std::vector<MeshCell> cells_;
    std::unordered_map<std::uint64_t, int> edge_lookup_;
};

using BoundaryRule = std::function<BoundaryLabel(const Point2&, const Point2&)>;

/// Builds a single-fracture mesh from polygons tiling a 2D domain. Vertices
/// closer than tol_len are merged, T-junctions become aligned edges of the
/// coarser cell, edges with a single neighbour are labelled by `rule`
/// (an `interior` answer there is treated as a gap).
Mesh build_mesh(const std::vector<Polygon>& cells, const BoundaryRule& rule = {});

AlignedGroup aligned_group(const Mesh& mesh, int cell, int edge);

/// The cell polygon with the interior vertices of every aligned group removed.
Polygon unify_aligned(const Mesh& mesh, int cell);

struct Distribution {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
};

Distribution describe(std::vector<double> values);

struct MeshQualityReport {
    std::size_t cells = 0;
    std::size_t dofs = 0;
    std::vector<double> ar_rr; // R_E / r_E per active cell
    std::vector<double> ar_rh; // R_E / h_E per active cell
    Distribution ar_rr_stats, ar_rh_stats, h_stats, r_stats, rho_stats;
    std::size_t n_tri = 0, n_quad = 0, n_tri_al = 0, n_quad_al = 0;
    double r_tri = 0.0, r_quad = 0.0, r_poly = 0.0, r_tri_al = 0.0, r_quad_al = 0.0;
    double ef = 0.0;     // #cells / #DOFs
    double ef_inv = 0.0; // #DOFs / #cells
    double gamma_r = 0.0;           // min r_E / D_E
    double gamma_h = 0.0;           // min h_E / D_E
    int max_vertices = 0;           // max N_E
    double max_aligned_ratio = 0.0; // max over groups of longest / shortest member
};

MeshQualityReport quality_report(const Mesh& mesh, std::size_t dof_count);

/// Checks loops, convexity and edge/cell incidence symmetry; returns a
/// description of the first violation or an empty string.
std::string check_consistency(const Mesh& mesh);

} // namespace vemref
