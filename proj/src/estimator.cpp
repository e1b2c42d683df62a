#include "vemref/estimator.hpp"

#include "vemref/quadrature.hpp"

#include <cmath>

namespace vemref {

namespace {

double fracture_K(const Problem& problem, int f)
{
    return problem.fractures.at(f).K;
}

/// Coefficients of lap(p) in the same scaled basis, for p given by `coef`.
Eigen::VectorXd laplacian_coefficients(const ScaledMonomials& basis, const Eigen::VectorXd& coef)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(coef.size());
    const double d2 = basis.diameter * basis.diameter;
    for (int i = 0; i < coef.size(); ++i) {
        const auto [a, b] = ScaledMonomials::exponents(i);
        if (a >= 2)
            out[ScaledMonomials::index(a - 2, b)] += a * (a - 1) * coef[i] / d2;
        if (b >= 2)
            out[ScaledMonomials::index(a, b - 2)] += b * (b - 1) * coef[i] / d2;
    }
    return out;
}

double cell_terms(const Mesh& mesh, const Solution& sol, const Problem& problem, int c, double& oscillation)
{
    const auto& cell = mesh.cell(c);
    const VemCell& vc = sol.cells.at(c);
    const auto& data = problem.fractures.at(cell.fracture);
    const double K = data.K;
    const double D2 = cell.geometry.diameter * cell.geometry.diameter;
    const int k = sol.layout.k;

    Eigen::VectorXd r = K * laplacian_coefficients(vc.basis, sol.projection(mesh, c));
    r.head(vc.source_proj.size()) += vc.source_proj;

    double residual = 0.0, osc = 0.0;
    for (const auto& q : polygon_quadrature(cell.polygon, cell.geometry.centroid, data_order(k))) {
        const Eigen::VectorXd m = vc.basis.eval(q.p);
        const double rv = r.dot(m);
        residual += q.weight * rv * rv;
        if (data.source) {
            const double dq = data.source(q.p) - vc.source_proj.dot(m.head(vc.source_proj.size()));
            osc += q.weight * dq * dq;
        }
    }
    oscillation = D2 / K * osc;
    return D2 / K * residual;
}

double edge_weight_sum(const Mesh& mesh, const Problem& problem, const MeshEdge& e)
{
    double Ke = 0.0;
    for (int c : e.cells)
        Ke += fracture_K(problem, mesh.cell(c).fracture);
    return Ke;
}

} // namespace

double edge_jump_squared(const Mesh& mesh, const Solution& sol, const Problem& problem, int e)
{
    const MeshEdge& edge = mesh.edge(e);
    const Point3 p0 = mesh.vertex(edge.vertices[0]).position;
    const Point3 p1 = mesh.vertex(edge.vertices[1]).position;
    const double len = distance(p0, p1);

    struct Side {
        Eigen::VectorXd coef;
        const ScaledMonomials* basis;
        const Frame* frame;
        Vec2 normal;
        double K;
    };
    std::vector<Side> sides;
    sides.reserve(edge.cells.size());
    for (int c : edge.cells) {
        const auto& cell = mesh.cell(c);
        const Frame& fr = mesh.frame(cell.fracture);
        Point2 a = fr.to_local(p0), b = fr.to_local(p1);
        if (!mesh.traverses_forward(c, mesh.loop_position(c, e)))
            std::swap(a, b);
        // Counter-clockwise loop: the outward normal is the traversal direction turned clockwise.
        const Vec2 t = b - a;
        const double l = norm(t);
        sides.push_back({sol.projection(mesh, c), &sol.cells.at(c).basis, &fr, Vec2{t.y / l, -t.x / l},
                         fracture_K(problem, cell.fracture)});
    }

    double s = 0.0;
    for (const auto& g : gauss_segment(2 * sol.layout.k)) {
        const Point3 x = p0 + g.t * (p1 - p0);
        double flux = 0.0;
        for (const Side& sd : sides) {
            const Eigen::Vector2d grad = sd.basis->grad(sd.frame->to_local(x)) * sd.coef;
            flux += sd.K * (grad[0] * sd.normal.x + grad[1] * sd.normal.y);
        }
        s += g.weight * len * flux * flux;
    }
    return s;
}

CellEstimate local_estimator(const Mesh& mesh, const Solution& sol, const Problem& problem, int c)
{
    CellEstimate est;
    est.residual = cell_terms(mesh, sol, problem, c, est.oscillation);
    for (int e : mesh.cell(c).edges) {
        const MeshEdge& edge = mesh.edge(e);
        if (edge.label == BoundaryLabel::dirichlet)
            continue;
        const double n = static_cast<double>(edge.cells.size());
        est.jump += mesh.edge_length(e) / (n * edge_weight_sum(mesh, problem, edge)) *
                    edge_jump_squared(mesh, sol, problem, e);
    }
    return est;
}

EstimatorReport global_estimator(const Mesh& mesh, const Solution& sol, const Problem& problem)
{
    EstimatorReport rep;
    rep.cells.assign(mesh.cell_count(), {});
    rep.eta2.assign(mesh.cell_count(), 0.0);

    // Each edge jump is integrated once and shared by its neighbours.
    std::vector<double> jump(mesh.edge_count(), 0.0);
    for (int e : mesh.active_edges()) {
        const MeshEdge& edge = mesh.edge(e);
        if (edge.label == BoundaryLabel::dirichlet)
            continue;
        const double w = mesh.edge_length(e) / edge_weight_sum(mesh, problem, edge);
        const double j2 = edge_jump_squared(mesh, sol, problem, e);
        jump[e] = w * j2;
        rep.eta_omega2 += jump[e];
    }
    for (int c : mesh.active_cells()) {
        CellEstimate& est = rep.cells[c];
        est.residual = cell_terms(mesh, sol, problem, c, est.oscillation);
        for (int e : mesh.cell(c).edges)
            est.jump += jump[e] / static_cast<double>(mesh.edge(e).cells.size());
        rep.eta2[c] = est.total();
        rep.sum_local += rep.eta2[c];
        rep.eta_omega2 += est.residual + est.oscillation;
    }
    rep.energy_norm = discrete_energy_norm(mesh, sol, problem);
    rep.eta_rel = rep.energy_norm > 0.0 ? std::sqrt(rep.eta_omega2) / rep.energy_norm : std::sqrt(rep.eta_omega2);
    if (!problem.exact.empty()) {
        rep.error_rel = energy_error(mesh, sol, problem).relative;
        rep.effectivity = rep.eta_rel > 0.0 ? rep.error_rel / rep.eta_rel : 0.0;
    }
    return rep;
}

} // namespace vemref
