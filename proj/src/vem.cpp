#include "vemref/vem.hpp"

#include "vemref/quadrature.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>

namespace vemref {

std::pair<int, int> ScaledMonomials::exponents(int i)
{
    int d = 0;
    while ((d + 1) * (d + 2) / 2 <= i)
        ++d;
    const int b = i - d * (d + 1) / 2;
    return {d - b, b};
}

Eigen::VectorXd ScaledMonomials::eval(const Point2& p) const
{
    const double x = (p.x - center.x) / diameter;
    const double y = (p.y - center.y) / diameter;
    double px[8], py[8];
    px[0] = py[0] = 1.0;
    for (int i = 1; i <= degree; ++i) {
        px[i] = px[i - 1] * x;
        py[i] = py[i - 1] * y;
    }
    Eigen::VectorXd v(size());
    int idx = 0;
    for (int d = 0; d <= degree; ++d)
        for (int b = 0; b <= d; ++b)
            v[idx++] = px[d - b] * py[b];
    return v;
}

Eigen::Matrix2Xd ScaledMonomials::grad(const Point2& p) const
{
    const double x = (p.x - center.x) / diameter;
    const double y = (p.y - center.y) / diameter;
    double px[8], py[8];
    px[0] = py[0] = 1.0;
    for (int i = 1; i <= degree; ++i) {
        px[i] = px[i - 1] * x;
        py[i] = py[i - 1] * y;
    }
    Eigen::Matrix2Xd g(2, size());
    int idx = 0;
    for (int d = 0; d <= degree; ++d)
        for (int b = 0; b <= d; ++b) {
            const int a = d - b;
            g(0, idx) = a > 0 ? a * px[a - 1] * py[b] / diameter : 0.0;
            g(1, idx) = b > 0 ? b * px[a] * py[b - 1] / diameter : 0.0;
            ++idx;
        }
    return g;
}

DofLayout build_dof_layout(const Mesh& mesh, int k)
{
    if (k < 1 || k > 3)
        throw VemError("VEM order must be 1, 2 or 3 (got " + std::to_string(k) + ")");
    DofLayout layout;
    layout.k = k;
    layout.vertex_dof.assign(mesh.vertex_count(), -1);
    layout.edge_start.assign(mesh.edge_count(), -1);
    layout.cell_start.assign(mesh.cell_count(), -1);
    const auto cells = mesh.active_cells();
    std::vector<char> used_vertex(mesh.vertex_count(), 0), used_edge(mesh.edge_count(), 0);
    for (int c : cells) {
        for (int v : mesh.cell(c).vertices)
            used_vertex[v] = 1;
        for (int e : mesh.cell(c).edges)
            used_edge[e] = 1;
    }
    int next = 0;
    for (std::size_t v = 0; v < used_vertex.size(); ++v)
        if (used_vertex[v])
            layout.vertex_dof[v] = next++;
    if (k > 1)
        for (std::size_t e = 0; e < used_edge.size(); ++e)
            if (used_edge[e]) {
                layout.edge_start[e] = next;
                next += k - 1;
            }
    const int nm = poly_dim(k - 2);
    if (nm > 0)
        for (int c : cells) {
            layout.cell_start[c] = next;
            next += nm;
        }
    layout.ndofs = next;
    return layout;
}

std::vector<int> local_dofs(const Mesh& mesh, const DofLayout& layout, int c)
{
    const auto& cell = mesh.cell(c);
    const int k = layout.k;
    const std::size_t n = cell.vertices.size();
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(layout.local_count(static_cast<int>(n))));
    for (int v : cell.vertices)
        out.push_back(layout.vertex_dof[v]);
    for (std::size_t i = 0; i < n; ++i) {
        const int start = layout.edge_start[cell.edges[i]];
        const bool fwd = mesh.traverses_forward(c, i);
        for (int j = 0; j < k - 1; ++j)
            out.push_back(start + (fwd ? j : k - 2 - j));
    }
    for (int b = 0; b < poly_dim(k - 2); ++b)
        out.push_back(layout.cell_start[c] + b);
    return out;
}

namespace {

struct EdgeNodes {
    std::vector<double> s;                    // k + 1 nodes on [0, 1]
    std::vector<SegmentNode> rule;            // exact to degree 2k
    std::vector<std::vector<double>> lagrange; // [quadrature node][basis]
};

const EdgeNodes& edge_nodes(int k)
{
    static const std::array<EdgeNodes, 4> table = [] {
        std::array<EdgeNodes, 4> t;
        for (int kk = 1; kk <= 3; ++kk) {
            auto& en = t[kk];
            en.s.push_back(0.0);
            for (double g : gauss_points(kk - 1))
                en.s.push_back(g);
            en.s.push_back(1.0);
            en.rule = gauss_segment(2 * kk);
            for (const auto& q : en.rule) {
                std::vector<double> l(en.s.size());
                for (std::size_t j = 0; j < en.s.size(); ++j) {
                    double v = 1.0;
                    for (std::size_t m = 0; m < en.s.size(); ++m)
                        if (m != j)
                            v *= (q.t - en.s[m]) / (en.s[j] - en.s[m]);
                    l[j] = v;
                }
                en.lagrange.push_back(std::move(l));
            }
        }
        return t;
    }();
    return table.at(static_cast<std::size_t>(k));
}

} // namespace

VemCell assemble_cell(const Mesh& mesh, int c, int k, double K, const ScalarField& source)
{
    if (k < 1 || k > 3)
        throw VemError("VEM order must be 1, 2 or 3");
    const auto& cell = mesh.cell(c);
    const Polygon& poly = cell.polygon;
    const auto& geo = cell.geometry;
    const int n = static_cast<int>(poly.size());
    const int nk = poly_dim(k);
    const int nk1 = poly_dim(k - 1);
    const int nk2 = poly_dim(k - 2);
    const int ndof = n * k + nk2;
    const int mom0 = n * k; // first moment DOF
    const double area = geo.area;

    VemCell vc;
    vc.cell = c;
    vc.k = k;
    vc.area = area;
    vc.basis = {geo.centroid, geo.diameter, k};
    const ScaledMonomials& mono = vc.basis;
    const double D = geo.diameter;

    // Mass matrix of P_k and load moments.
    const auto qpts = polygon_quadrature(poly, geo.centroid, std::max(2 * k, data_order(k)));
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nk, nk);
    Eigen::VectorXd qmom = Eigen::VectorXd::Zero(nk1);
    for (const auto& q : qpts) {
        const Eigen::VectorXd m = mono.eval(q.p);
        H.noalias() += q.weight * m * m.transpose();
        if (source)
            qmom += q.weight * source(q.p) * m.head(nk1);
    }

    // D: DOFs of each monomial.
    const auto& en = edge_nodes(k);
    Eigen::MatrixXd Dm(ndof, nk);
    for (int i = 0; i < n; ++i)
        Dm.row(i) = mono.eval(poly[i]).transpose();
    for (int i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly.next(i);
        for (int j = 0; j < k - 1; ++j)
            Dm.row(n + i * (k - 1) + j) = mono.eval(a + en.s[j + 1] * (b - a)).transpose();
    }
    if (nk2 > 0)
        Dm.bottomRows(nk2) = H.topRows(nk2) / area;

    auto node_dof = [&](int edge, std::size_t j) {
        if (j == 0)
            return edge;
        if (j == static_cast<std::size_t>(k))
            return (edge + 1) % n;
        return n + edge * (k - 1) + static_cast<int>(j) - 1;
    };

    // B for the elliptic projector, and the boundary parts of the gradient projections.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, ndof);
    Eigen::MatrixXd Ex = Eigen::MatrixXd::Zero(nk1, ndof);
    Eigen::MatrixXd Ey = Eigen::MatrixXd::Zero(nk1, ndof);
    for (int i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly.next(i);
        const double len = distance(a, b);
        const Vec2 nrm{(b.y - a.y) / len, -(b.x - a.x) / len};
        for (std::size_t q = 0; q < en.rule.size(); ++q) {
            const Point2 x = a + en.rule[q].t * (b - a);
            const double w = en.rule[q].weight * len;
            const Eigen::Matrix2Xd g = mono.grad(x);
            const Eigen::VectorXd dn = nrm.x * g.row(0).transpose() + nrm.y * g.row(1).transpose();
            const Eigen::VectorXd m = mono.eval(x).head(nk1);
            for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j) {
                const double lw = w * en.lagrange[q][j];
                const int dof = node_dof(i, j);
                B.col(dof) += lw * dn;
                Ex.col(dof) += lw * nrm.x * m;
                Ey.col(dof) += lw * nrm.y * m;
                if (k == 1)
                    B(0, dof) += lw / geo.perimeter;
            }
        }
    }
    if (k > 1)
        B(0, mom0) = 1.0;
    for (int al = 0; al < nk; ++al) {
        const auto [ax, ay] = ScaledMonomials::exponents(al);
        if (ax >= 2)
            B(al, mom0 + ScaledMonomials::index(ax - 2, ay)) -= ax * (ax - 1) * area / (D * D);
        if (ay >= 2)
            B(al, mom0 + ScaledMonomials::index(ax, ay - 2)) -= ay * (ay - 1) * area / (D * D);
    }
    for (int be = 0; be < nk1; ++be) {
        const auto [bx, by] = ScaledMonomials::exponents(be);
        if (bx >= 1)
            Ex(be, mom0 + ScaledMonomials::index(bx - 1, by)) -= bx * area / D;
        if (by >= 1)
            Ey(be, mom0 + ScaledMonomials::index(bx, by - 1)) -= by * area / D;
    }

    const Eigen::MatrixXd G = B * Dm;
    vc.pi_nabla = G.partialPivLu().solve(B);
    vc.dofs_of_monomials = Dm;

    // L2 projections through the enhancement constraint.
    Eigen::MatrixXd C(nk, ndof);
    C = H * vc.pi_nabla;
    for (int be = 0; be < nk2; ++be) {
        C.row(be).setZero();
        C(be, mom0 + be) = area;
    }
    const auto Hfull = H.ldlt();
    vc.pi0 = Hfull.solve(C);
    const Eigen::MatrixXd H1 = H.topLeftCorner(nk1, nk1);
    const auto H1f = H1.ldlt();
    vc.pi0_km1 = H1f.solve(C.topRows(nk1));
    vc.grad_x = H1f.solve(Ex);
    vc.grad_y = H1f.solve(Ey);

    vc.consistency = K * (Ex.transpose() * vc.grad_x + Ey.transpose() * vc.grad_y);
    const Eigen::MatrixXd I_minus = Eigen::MatrixXd::Identity(ndof, ndof) - Dm * vc.pi_nabla;
    vc.stabilization = K * I_minus.transpose() * I_minus;
    vc.stiffness = vc.consistency + vc.stabilization;
    vc.load = vc.pi0_km1.transpose() * qmom;
    vc.source_proj = H1f.solve(qmom);
    return vc;
}

Eigen::VectorXd Solution::projection(const Mesh& mesh, int c) const
{
    const auto dofs = local_dofs(mesh, layout, c);
    Eigen::VectorXd ul(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i)
        ul[static_cast<Eigen::Index>(i)] = u[dofs[i]];
    return cells.at(c).pi_nabla * ul;
}

namespace {

std::vector<int> vertex_fractures(const Mesh& mesh)
{
    std::vector<int> f(mesh.vertex_count(), -1);
    for (int c : mesh.active_cells())
        for (int v : mesh.cell(c).vertices)
            if (f[v] < 0)
                f[v] = mesh.cell(c).fracture;
    return f;
}

} // namespace

Eigen::VectorXd interpolate(const Mesh& mesh, const DofLayout& layout, const std::vector<ScalarField>& fields)
{
    const int k = layout.k;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.ndofs);
    const auto vf = vertex_fractures(mesh);
    for (std::size_t v = 0; v < layout.vertex_dof.size(); ++v)
        if (layout.vertex_dof[v] >= 0)
            out[layout.vertex_dof[v]] = fields.at(vf[v])(mesh.local_point(static_cast<int>(v), vf[v]));
    const auto gp = gauss_points(k - 1);
    for (std::size_t e = 0; e < layout.edge_start.size(); ++e) {
        if (layout.edge_start[e] < 0)
            continue;
        const auto& ed = mesh.edge(static_cast<int>(e));
        const int f = mesh.cell(ed.cells.front()).fracture;
        const Point2 a = mesh.local_point(ed.vertices[0], f), b = mesh.local_point(ed.vertices[1], f);
        for (int j = 0; j < k - 1; ++j)
            out[layout.edge_start[e] + j] = fields.at(f)(a + gp[j] * (b - a));
    }
    const int nm = poly_dim(k - 2);
    for (std::size_t c = 0; c < layout.cell_start.size(); ++c) {
        if (layout.cell_start[c] < 0)
            continue;
        const auto& cell = mesh.cell(static_cast<int>(c));
        const ScaledMonomials mono{cell.geometry.centroid, cell.geometry.diameter, k - 2};
        Eigen::VectorXd mom = Eigen::VectorXd::Zero(nm);
        for (const auto& q : polygon_quadrature(cell.polygon, cell.geometry.centroid, data_order(k)))
            mom += q.weight * fields.at(cell.fracture)(q.p) * mono.eval(q.p);
        out.segment(layout.cell_start[c], nm) = mom / cell.geometry.area;
    }
    return out;
}

LinearSystem assemble_system(const Mesh& mesh, const DofLayout& layout, const Problem& problem,
                             std::vector<VemCell>* cells)
{
    const int k = layout.k;
    LinearSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(layout.ndofs);
    std::vector<Eigen::Triplet<double>> trip;
    if (cells)
        cells->assign(mesh.cell_count(), VemCell{});
    for (int c : mesh.active_cells()) {
        const int f = mesh.cell(c).fracture;
        if (f >= static_cast<int>(problem.fractures.size()))
            throw VemError("no data for fracture " + std::to_string(f));
        const auto& data = problem.fractures[f];
        VemCell vc = assemble_cell(mesh, c, k, data.K, data.source);
        const auto dofs = local_dofs(mesh, layout, c);
        const auto nl = static_cast<Eigen::Index>(dofs.size());
        for (Eigen::Index i = 0; i < nl; ++i) {
            sys.rhs[dofs[i]] += vc.load[i];
            for (Eigen::Index j = 0; j < nl; ++j)
                trip.emplace_back(dofs[i], dofs[j], vc.stiffness(i, j));
        }
        if (cells)
            (*cells)[c] = std::move(vc);
    }
    sys.matrix.resize(layout.ndofs, layout.ndofs);
    sys.matrix.setFromTriplets(trip.begin(), trip.end());

    std::map<int, double> fixed;
    const auto gp = gauss_points(k - 1);
    for (int e : mesh.active_edges()) {
        const auto& ed = mesh.edge(e);
        if (ed.label != BoundaryLabel::dirichlet)
            continue;
        const int f = mesh.cell(ed.cells.front()).fracture;
        const auto& g = problem.fractures[f].dirichlet;
        auto value = [&](const Point2& p) { return g ? g(p) : 0.0; };
        const Point2 a = mesh.local_point(ed.vertices[0], f), b = mesh.local_point(ed.vertices[1], f);
        fixed[layout.vertex_dof[ed.vertices[0]]] = value(a);
        fixed[layout.vertex_dof[ed.vertices[1]]] = value(b);
        for (int j = 0; j < k - 1; ++j)
            fixed[layout.edge_start[e] + j] = value(a + gp[j] * (b - a));
    }
    sys.dirichlet.reserve(fixed.size());
    sys.dirichlet_values.resize(static_cast<Eigen::Index>(fixed.size()));
    for (const auto& [dof, val] : fixed) {
        sys.dirichlet_values[static_cast<Eigen::Index>(sys.dirichlet.size())] = val;
        sys.dirichlet.push_back(dof);
    }
    return sys;
}

Solution assemble_and_solve(const Mesh& mesh, int k, const Problem& problem, SolverKind solver)
{
    Solution sol;
    sol.layout = build_dof_layout(mesh, k);
    const LinearSystem sys = assemble_system(mesh, sol.layout, problem, &sol.cells);
    if (sys.dirichlet.empty())
        throw VemError("singular system: no Dirichlet DOFs");
    const int nd = sol.layout.ndofs;

    sol.u = Eigen::VectorXd::Zero(nd);
    std::vector<char> is_fixed(nd, 0);
    for (std::size_t i = 0; i < sys.dirichlet.size(); ++i) {
        is_fixed[sys.dirichlet[i]] = 1;
        sol.u[sys.dirichlet[i]] = sys.dirichlet_values[static_cast<Eigen::Index>(i)];
    }
    std::vector<int> free_id(nd, -1);
    int nf = 0;
    for (int d = 0; d < nd; ++d)
        free_id[d] = is_fixed[d] ? -1 : nf++;

    Eigen::VectorXd b(nf);
    for (int d = 0; d < nd; ++d)
        if (free_id[d] >= 0)
            b[free_id[d]] = sys.rhs[d];
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(sys.matrix.nonZeros()));
    for (int col = 0; col < sys.matrix.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (free_id[r] < 0)
                continue;
            if (free_id[col] >= 0)
                trip.emplace_back(free_id[r], free_id[col], it.value());
            else
                b[free_id[r]] -= it.value() * sol.u[col];
        }
    Eigen::SparseMatrix<double> A(nf, nf);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd x;
    if (solver == SolverKind::direct) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
        if (ldlt.info() != Eigen::Success)
            throw VemError("sparse factorization failed");
        x = ldlt.solve(b);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-12);
        cg.setMaxIterations(std::max(1000, 20 * nf));
        cg.compute(A);
        x = cg.solve(b);
        sol.cg_iterations = static_cast<int>(cg.iterations());
        if (cg.info() != Eigen::Success)
            throw VemError("conjugate gradient did not converge (residual " + std::to_string(cg.error()) + ")");
    }
    for (int d = 0; d < nd; ++d)
        if (free_id[d] >= 0)
            sol.u[d] = x[free_id[d]];
    sol.cell_fracture.assign(mesh.cell_count(), -1);
    for (int c : mesh.active_cells())
        sol.cell_fracture[c] = mesh.cell(c).fracture;
    return sol;
}

EnergyError energy_error(const Mesh& mesh, const Solution& sol, const Problem& problem)
{
    if (problem.exact.empty())
        throw VemError("energy_error: no exact solution");
    const int k = sol.layout.k;
    EnergyError out;
    double num = 0.0, den = 0.0;
    for (int c : mesh.active_cells()) {
        const auto& cell = mesh.cell(c);
        const int f = cell.fracture;
        const double K = problem.fractures[f].K;
        const auto& ex = problem.exact.at(f);
        const Eigen::VectorXd coef = sol.projection(mesh, c);
        const auto& mono = sol.cells[c].basis;
        for (const auto& q : polygon_quadrature(cell.polygon, cell.geometry.centroid, data_order(k))) {
            const Eigen::Vector2d gh = mono.grad(q.p) * coef;
            const Vec2 gu = ex.grad(q.p);
            const double dx = gu.x - gh[0], dy = gu.y - gh[1];
            num += q.weight * K * (dx * dx + dy * dy);
            den += q.weight * K * (gu.x * gu.x + gu.y * gu.y);
        }
    }
    out.error = std::sqrt(num);
    out.reference = std::sqrt(den);
    out.relative = den > 0.0 ? out.error / out.reference : out.error;
    return out;
}

double discrete_energy_norm(const Mesh& mesh, const Solution& sol, const Problem& problem)
{
    double s = 0.0;
    for (int c : mesh.active_cells()) {
        const auto& cell = mesh.cell(c);
        const double K = problem.fractures[cell.fracture].K;
        const Eigen::VectorXd coef = sol.projection(mesh, c);
        const auto& mono = sol.cells[c].basis;
        for (const auto& q : polygon_quadrature(cell.polygon, cell.geometry.centroid, 2 * sol.layout.k)) {
            const Eigen::Vector2d g = mono.grad(q.p) * coef;
            s += q.weight * K * g.squaredNorm();
        }
    }
    return std::sqrt(s);
}

} // namespace vemref
