#pragma once

#include "vemref/expression.hpp"
#include "vemref/mesh.hpp"
#include "vemref/vem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vemref {

class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Selects fracture boundary edges whose endpoints both satisfy coord[axis] == value.
struct BoundarySelector {
    int axis = 0; // 0 = x, 1 = y, 2 = z
    double value = 0.0;
    BoundaryLabel label = BoundaryLabel::dirichlet;
};

struct Fracture {
    int id = 0;
    std::vector<Point3> vertices;
    Frame frame; // vertices are counter-clockwise in (u, v)
    double K = 1.0;
    std::vector<BoundarySelector> boundary; // first match wins
    BoundaryLabel default_label = BoundaryLabel::dirichlet;
    Expression solution; // optional, drives manufactured data
    Expression source;
    Expression dirichlet;

    Polygon local_polygon() const;
};

struct Trace {
    int id = 0;
    Point3 a, b;
    std::array<int, 2> fractures{-1, -1};
    std::array<std::array<Point2, 2>, 2> local; // endpoints in each fracture frame
};

struct FractureNetwork {
    std::vector<Fracture> fractures;
    std::vector<Trace> traces;
    double tol_len = 1e-9; // absolute, set from the network bounding box
};

/// Frame from the Newell normal with u along the first edge; v is chosen so the
/// vertex loop is counter-clockwise. Throws NetworkError naming a vertex off the plane.
Frame fracture_frame(const std::vector<Point3>& vertices, double tol_len);

/// Common segments of every fracture pair longer than tol_len.
std::vector<Trace> compute_traces(const std::vector<Fracture>& fractures, double tol_len);

/// Fills frames, tol_len and traces.
void prepare_network(FractureNetwork& net);

/// Minimal mesh: per-fracture convex decomposition, cut by every trace (a
/// trace tip inside a cell is extended to that cell's boundary only), nodes
/// unified by 3D position and inserted on the other side's trace edges.
Mesh build_minimal_dfn_mesh(const FractureNetwork& net);

/// Empty when, for every trace, the mesh nodes on it seen from each incident
/// fracture coincide within tol_len; otherwise the first mismatch.
std::string check_conformity(const Mesh& mesh, const FractureNetwork& net);

/// Q = -K lap U, g = U on the fracture boundary, reference U and grad U, from
/// the per-fracture solution expressions; fractures without a solution use
/// their source / dirichlet expressions.
Problem manufactured_problem(const FractureNetwork& net);

struct FieldJet {
    double value;
    Vec2 grad;       // in the fracture frame
    double laplacian; // in-plane
};

FieldJet evaluate(const Expression& expr, const Fracture& f, const Point2& local);

/// Network description in JSON. Errors carry line context.
FractureNetwork parse_network(const std::string& json_text);
FractureNetwork load_network(const std::string& path);

} // namespace vemref
