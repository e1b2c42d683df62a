#pragma once

#include "vemref/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <vector>

namespace vemref {

class VemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ScalarField = std::function<double(const Point2&)>;
using VectorField = std::function<Vec2(const Point2&)>;

/// Data of one fracture (or of the single 2D domain), in fracture-local coordinates.
struct FractureData {
    double K = 1.0;
    ScalarField source;    // Q; empty means zero
    ScalarField dirichlet; // g_D; empty means zero
};

struct ExactSolution {
    ScalarField u;
    VectorField grad;
};

struct Problem {
    std::vector<FractureData> fractures;
    std::vector<ExactSolution> exact; // empty when no reference solution is known
};

inline int poly_dim(int degree)
{
    return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2;
}

/// Scaled monomials ((x - c) / D)^alpha ordered by degree, then (d - j, j).
struct ScaledMonomials {
    Point2 center;
    double diameter = 1.0;
    int degree = 1;

    int size() const { return poly_dim(degree); }
    static int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }
    static std::pair<int, int> exponents(int i);
    Eigen::VectorXd eval(const Point2& p) const;
    /// Rows: d/dx, d/dy.
    Eigen::Matrix2Xd grad(const Point2& p) const;
};

struct DofLayout {
    int k = 1;
    std::vector<int> vertex_dof;  // per vertex id, -1 when unused
    std::vector<int> edge_start;  // per edge id: first of k-1 DOFs in the edge's own orientation
    std::vector<int> cell_start;  // per cell id: first moment DOF
    int ndofs = 0;

    int local_count(int n_edges) const { return n_edges * k + k * (k - 1) / 2; }
};

DofLayout build_dof_layout(const Mesh& mesh, int k);

/// Global DOF ids of the local DOFs of a cell: vertices, edge points in loop
/// traversal order, moments.
std::vector<int> local_dofs(const Mesh& mesh, const DofLayout& layout, int cell);

struct VemCell {
    int cell = -1;
    int k = 1;
    ScaledMonomials basis;
    double area = 0.0;
    Eigen::MatrixXd pi_nabla; // P_k coefficients x local DOFs
    Eigen::MatrixXd pi0;      // P_k coefficients x local DOFs (L2 projection)
    Eigen::MatrixXd pi0_km1;  // P_{k-1} coefficients x local DOFs
    Eigen::MatrixXd grad_x;   // P_{k-1} coefficients of Pi0_{k-1} d/dx
    Eigen::MatrixXd grad_y;
    Eigen::MatrixXd dofs_of_monomials; // D: local DOFs x P_k
    Eigen::MatrixXd consistency;
    Eigen::MatrixXd stabilization;
    Eigen::MatrixXd stiffness;
    Eigen::VectorXd load;
    Eigen::VectorXd source_proj; // P_{k-1} coefficients of Pi0_{k-1} Q
};

/// Quadrature order used for non-polynomial data integrals on a cell.
inline int data_order(int k)
{
    return 2 * k + 2;
}

VemCell assemble_cell(const Mesh& mesh, int cell, int k, double K, const ScalarField& source);

struct LinearSystem {
    Eigen::SparseMatrix<double> matrix; // all DOFs, before Dirichlet elimination
    Eigen::VectorXd rhs;
    std::vector<int> dirichlet;          // DOF ids
    Eigen::VectorXd dirichlet_values;    // per entry of `dirichlet`
};

enum class SolverKind { direct, cg };

struct Solution {
    DofLayout layout;
    Eigen::VectorXd u;
    std::vector<VemCell> cells; // indexed by cell id; cell == -1 for inactive ids
    std::vector<int> cell_fracture;
    int cg_iterations = 0;

    /// Pi-nabla coefficients of the discrete solution on a cell.
    Eigen::VectorXd projection(const Mesh& mesh, int cell) const;
};

LinearSystem assemble_system(const Mesh& mesh, const DofLayout& layout, const Problem& problem,
                             std::vector<VemCell>* cells = nullptr);

Solution assemble_and_solve(const Mesh& mesh, int k, const Problem& problem, SolverKind solver = SolverKind::direct);

/// Interpolates a field at vertex and edge DOFs; moments by quadrature.
Eigen::VectorXd interpolate(const Mesh& mesh, const DofLayout& layout, const std::vector<ScalarField>& per_fracture);

struct EnergyError {
    double error = 0.0;    // |||U - Pi u|||
    double reference = 0.0; // |||U|||
    double relative = 0.0;
};

EnergyError energy_error(const Mesh& mesh, const Solution& sol, const Problem& problem);

/// Broken energy norm of Pi-nabla u.
double discrete_energy_norm(const Mesh& mesh, const Solution& sol, const Problem& problem);

} // namespace vemref
