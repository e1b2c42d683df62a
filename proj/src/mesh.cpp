#include "vemref/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace vemref {

namespace {

bool collinear_at(const Polygon& poly, std::size_t i)
{
    const std::size_t n = poly.size();
    return are_collinear(poly[(i + n - 1) % n], poly[i], poly.next(i));
}

} // namespace

std::uint64_t Mesh::edge_key(int a, int b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

int Mesh::add_fracture(const Frame& frame)
{
    frames_.push_back(frame);
    return static_cast<int>(frames_.size()) - 1;
}

int Mesh::add_vertex(const Point3& p)
{
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw MeshError("non-finite vertex coordinate");
    vertices_.push_back({p});
    return static_cast<int>(vertices_.size()) - 1;
}

int Mesh::create_edge(int v0, int v1)
{
    if (v0 == v1)
        throw MeshError("edge endpoints must be distinct");
    MeshEdge e;
    e.vertices = {v0, v1};
    edges_.push_back(std::move(e));
    const int id = static_cast<int>(edges_.size()) - 1;
    edge_lookup_[edge_key(v0, v1)] = id;
    return id;
}

int Mesh::find_edge(int v0, int v1) const
{
    auto it = edge_lookup_.find(edge_key(v0, v1));
    if (it == edge_lookup_.end() || !edges_[it->second].active)
        return -1;
    return it->second;
}

double Mesh::edge_length(int e) const
{
    const auto& ed = edges_.at(e);
    return distance(vertices_[ed.vertices[0]].position, vertices_[ed.vertices[1]].position);
}

std::size_t Mesh::loop_position(int cell, int edge) const
{
    const auto& c = cells_.at(cell);
    auto it = std::find(c.edges.begin(), c.edges.end(), edge);
    if (it == c.edges.end())
        throw MeshError("edge " + std::to_string(edge) + " is not on cell " + std::to_string(cell));
    return static_cast<std::size_t>(it - c.edges.begin());
}

bool Mesh::traverses_forward(int cell, std::size_t pos) const
{
    const auto& c = cells_.at(cell);
    return c.vertices[pos] == edges_.at(c.edges[pos]).vertices[0];
}

int Mesh::add_cell(int fracture, const std::vector<int>& loop, bool allow_shared_orientation)
{
    if (fracture < 0 || fracture >= fracture_count())
        throw MeshError("unknown fracture " + std::to_string(fracture));
    if (loop.size() < 3)
        throw MeshError("cell loop needs at least three vertices");
    const int id = static_cast<int>(cells_.size());
    MeshCell cell;
    cell.fracture = fracture;
    cell.vertices = loop;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int v0 = loop[i];
        const int v1 = loop[(i + 1) % n];
        int e = find_edge(v0, v1);
        if (e < 0) {
            e = create_edge(v0, v1);
        } else if (!allow_shared_orientation) {
            const bool fwd = edges_[e].vertices[0] == v0;
            for (int other : edges_[e].cells) {
                if (cells_[other].fracture != fracture)
                    continue;
                if (traverses_forward(other, loop_position(other, e)) == fwd)
                    throw MeshError("overlapping cells " + std::to_string(other) + " and " + std::to_string(id));
            }
        }
        cell.edges.push_back(e);
    }
    cells_.push_back(std::move(cell));
    for (int e : cells_.back().edges)
        edges_[e].cells.push_back(id);
    refresh_cell(id);
    return id;
}

void Mesh::refresh_cell(int c)
{
    auto& cell = cells_.at(c);
    cell.polygon.vertices.clear();
    for (int v : cell.vertices)
        cell.polygon.vertices.push_back(local_point(v, cell.fracture));
    cell.geometry = compute_cell_geometry(cell.polygon);
}

std::vector<int> Mesh::active_cells() const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i].active)
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Mesh::active_edges() const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].active)
            out.push_back(static_cast<int>(i));
    return out;
}

std::size_t Mesh::active_cell_count() const
{
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](const MeshCell& c) { return c.active; }));
}

double Mesh::total_active_area() const
{
    double a = 0.0;
    for (const auto& c : cells_)
        if (c.active)
            a += c.geometry.area;
    return a;
}

void Mesh::replace_in_loop(int cell, int old_edge, const EdgeSplit& split)
{
    const std::size_t pos = loop_position(cell, old_edge);
    const bool fwd = traverses_forward(cell, pos);
    auto& c = cells_[cell];
    const auto off = static_cast<std::ptrdiff_t>(pos + 1);
    c.vertices.insert(c.vertices.begin() + off, split.vertex);
    if (fwd) {
        c.edges[pos] = split.edges[0];
        c.edges.insert(c.edges.begin() + off, split.edges[1]);
    } else {
        c.edges[pos] = split.edges[1];
        c.edges.insert(c.edges.begin() + off, split.edges[0]);
    }
}

EdgeSplit Mesh::split_edge(int e, const Point3& position)
{
    if (!edges_.at(e).active)
        throw MeshError("cannot split inactive edge " + std::to_string(e));
    EdgeSplit s;
    s.vertex = add_vertex(position);
    const auto [a, b] = edges_[e].vertices;
    s.edges[0] = create_edge(a, s.vertex);
    s.edges[1] = create_edge(s.vertex, b);
    for (int sub : s.edges) {
        edges_[sub].label = edges_[e].label;
        edges_[sub].trace_id = edges_[e].trace_id;
        edges_[sub].cells = edges_[e].cells;
    }
    edges_[e].active = false;
    edge_lookup_.erase(edge_key(a, b));
    for (int c : edges_[e].cells) {
        replace_in_loop(c, e, s);
        refresh_cell(c);
    }
    return s;
}

Point2 Mesh::chord_point(int c, ChordEnd end) const
{
    const auto& poly = cells_.at(c).polygon;
    const Point2& p0 = poly[end.loop_index];
    const Point2& p1 = poly.next(end.loop_index);
    return end.on_vertex() ? p0 : p0 + end.t * (p1 - p0);
}

bool Mesh::chord_is_valid(int c, ChordEnd a, ChordEnd b) const
{
    try {
        validate_chord(c, a, b);
        return true;
    } catch (const MeshError&) {
        return false;
    }
}

void Mesh::validate_chord(int c, ChordEnd a, ChordEnd b) const
{
    if (!cells_.at(c).active)
        throw MeshError("cannot split inactive cell " + std::to_string(c));
    const MeshCell& parent = cells_[c];
    const std::size_t n = parent.vertices.size();
    for (const ChordEnd& end : {a, b})
        if (end.loop_index >= n || end.t < 0.0 || end.t >= 1.0)
            throw MeshError("chord end outside the cell loop");

    // Prospective loop with the chord points inserted, validated before mutating.
    struct Slot {
        Point2 p;
        int tag; // 0 ordinary, 1 = end a, 2 = end b
    };
    std::vector<Slot> aug;
    for (std::size_t i = 0; i < n; ++i) {
        int tag = 0;
        if (a.on_vertex() && a.loop_index == i)
            tag |= 1;
        if (b.on_vertex() && b.loop_index == i)
            tag |= 2;
        aug.push_back({parent.polygon[i], tag});
        std::vector<std::pair<double, int>> inner;
        if (!a.on_vertex() && a.loop_index == i)
            inner.emplace_back(a.t, 1);
        if (!b.on_vertex() && b.loop_index == i)
            inner.emplace_back(b.t, 2);
        if (inner.size() == 2)
            throw MeshError("degenerate chord: both ends inside one edge");
        for (const auto& [t, tag2] : inner)
            aug.push_back({parent.polygon[i] + t * (parent.polygon.next(i) - parent.polygon[i]), tag2});
    }
    std::size_t ia = aug.size(), ib = aug.size();
    for (std::size_t i = 0; i < aug.size(); ++i) {
        if (aug[i].tag & 1)
            ia = i;
        if (aug[i].tag & 2)
            ib = i;
    }
    const std::size_t m = aug.size();
    if (ia == ib)
        throw MeshError("degenerate chord: zero length");
    if ((ia + 1) % m == ib || (ib + 1) % m == ia)
        throw MeshError("degenerate chord: coincides with an existing edge");
    const double tol_area = tol::area_rel * parent.geometry.diameter * parent.geometry.diameter;
    for (auto [from, to] : {std::pair{ia, ib}, std::pair{ib, ia}}) {
        Polygon child;
        for (std::size_t i = from;; i = (i + 1) % m) {
            child.vertices.push_back(aug[i].p);
            if (i == to)
                break;
        }
        // A chord running along an aligned side leaves a zero-area child.
        const double area = signed_area(child.vertices);
        const double ref = std::max(tol_area, 1e-9 * parent.geometry.area);
        if (!(area > ref) || !is_convex(child))
            throw MeshError("degenerate chord: child without interior");
    }

}

CellSplit Mesh::split_cell(int c, ChordEnd a, ChordEnd b, int chord_trace_id)
{
    validate_chord(c, a, b);
    const MeshCell parent = cells_[c];

    CellSplit out;
    const Frame& fr = frames_[parent.fracture];
    const int edge_a = parent.edges[a.loop_index];
    const int edge_b = parent.edges[b.loop_index];
    const Point2 pa = chord_point(c, a);
    const Point2 pb = chord_point(c, b);
    auto resolve = [&](const ChordEnd& end, int edge, const Point2& p) {
        if (end.on_vertex())
            return parent.vertices[end.loop_index];
        const EdgeSplit s = split_edge(edge, fr.to_global(p));
        for (int sub : s.edges) {
            edges_[sub].marked = true;
            out.split_edges.push_back(sub);
        }
        return s.vertex;
    };
    const int va = resolve(a, edge_a, pa);
    const int vb = resolve(b, edge_b, pb);

    const std::vector<int> loopv = cells_[c].vertices;
    const std::vector<int> loope = cells_[c].edges;
    const std::size_t nn = loopv.size();
    const auto p = static_cast<std::size_t>(std::find(loopv.begin(), loopv.end(), va) - loopv.begin());
    const auto q = static_cast<std::size_t>(std::find(loopv.begin(), loopv.end(), vb) - loopv.begin());

    out.chord_edge = create_edge(va, vb);
    edges_[out.chord_edge].trace_id = chord_trace_id;

    auto make_child = [&](std::size_t from, std::size_t to) {
        MeshCell child;
        child.fracture = parent.fracture;
        child.parent = c;
        for (std::size_t i = from;; i = (i + 1) % nn) {
            child.vertices.push_back(loopv[i]);
            if (i == to)
                break;
            child.edges.push_back(loope[i]);
        }
        child.edges.push_back(out.chord_edge);
        cells_.push_back(std::move(child));
        return static_cast<int>(cells_.size()) - 1;
    };
    out.child1 = make_child(p, q);
    out.child2 = make_child(q, p);
    edges_[out.chord_edge].cells = {out.child1, out.child2};
    for (int child : {out.child1, out.child2}) {
        for (int e : cells_[child].edges) {
            if (e == out.chord_edge)
                continue;
            auto& ec = edges_[e].cells;
            std::replace(ec.begin(), ec.end(), c, child);
        }
        refresh_cell(child);
    }
    cells_[c].active = false;
    return out;
}

void Mesh::merge_vertex(int from, int to)
{
    if (from == to)
        return;
    std::vector<int> touched;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& ed = edges_[e];
        if (!ed.active || (ed.vertices[0] != from && ed.vertices[1] != from))
            continue;
        auto it = edge_lookup_.find(edge_key(ed.vertices[0], ed.vertices[1]));
        if (it != edge_lookup_.end() && it->second == static_cast<int>(e))
            edge_lookup_.erase(it);
        for (int& v : ed.vertices)
            if (v == from)
                v = to;
        if (ed.vertices[0] == ed.vertices[1])
            throw MeshError("vertex merge collapses edge " + std::to_string(e));
        touched.push_back(static_cast<int>(e));
    }
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        auto& cell = cells_[c];
        bool hit = false;
        for (int& v : cell.vertices)
            if (v == from) {
                v = to;
                hit = true;
            }
        if (hit && cell.active)
            refresh_cell(static_cast<int>(c));
    }
    for (int e : touched) {
        const auto key = edge_key(edges_[e].vertices[0], edges_[e].vertices[1]);
        auto it = edge_lookup_.find(key);
        if (it == edge_lookup_.end() || !edges_[it->second].active)
            edge_lookup_[key] = e;
        else if (it->second != e)
            merge_edge(it->second, e);
    }
}

void Mesh::merge_edge(int keep, int drop)
{
    auto& k = edges_.at(keep);
    auto& d = edges_.at(drop);
    if (edge_key(k.vertices[0], k.vertices[1]) != edge_key(d.vertices[0], d.vertices[1]))
        throw MeshError("merge_edge: endpoints differ");
    for (int c : d.cells) {
        auto& loop = cells_[c].edges;
        std::replace(loop.begin(), loop.end(), drop, keep);
        k.cells.push_back(c);
    }
    if (k.trace_id < 0)
        k.trace_id = d.trace_id;
    if (k.label != d.label)
        k.label = BoundaryLabel::interior;
    d.cells.clear();
    d.active = false;
    edge_lookup_[edge_key(k.vertices[0], k.vertices[1])] = keep;
}

std::vector<std::size_t> Mesh::corner_positions(int c) const
{
    const auto& poly = cells_.at(c).polygon;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (!collinear_at(poly, i))
            out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------

Mesh build_mesh(const std::vector<Polygon>& polys, const BoundaryRule& rule)
{
    if (polys.empty())
        throw MeshError("build_mesh: no cells");
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const auto& poly : polys)
        for (const auto& p : poly.vertices) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    const double tol_len = tol::length_rel * std::hypot(xmax - xmin, ymax - ymin);

    Mesh mesh;
    mesh.add_fracture(Frame{});

    // Spatial hash with cells of size tol_len; neighbours in a 3x3 stencil.
    std::map<std::pair<long long, long long>, std::vector<int>> grid;
    std::vector<Point2> pts;
    auto key_of = [&](const Point2& p) {
        return std::pair{static_cast<long long>(std::floor((p.x - xmin) / tol_len)),
                         static_cast<long long>(std::floor((p.y - ymin) / tol_len))};
    };
    auto vertex_for = [&](const Point2& p) {
        const auto [kx, ky] = key_of(p);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({kx + dx, ky + dy});
                if (it == grid.end())
                    continue;
                for (int v : it->second)
                    if (distance(pts[v], p) <= tol_len)
                        return v;
            }
        const int v = mesh.add_vertex(Point3{p.x, p.y, 0.0});
        pts.push_back(p);
        grid[{kx, ky}].push_back(v);
        return v;
    };

    std::vector<std::vector<int>> loops;
    for (const auto& poly_in : polys) {
        Polygon poly = poly_in;
        if (signed_area(poly.vertices) < 0.0)
            std::reverse(poly.vertices.begin(), poly.vertices.end());
        std::vector<int> loop;
        for (const auto& p : poly.vertices) {
            const int v = vertex_for(p);
            if (loop.empty() || (loop.back() != v && loop.front() != v))
                loop.push_back(v);
        }
        loops.push_back(std::move(loop));
    }

    // T-junctions: vertices lying inside an edge of another cell.
    for (auto& loop : loops) {
        std::vector<int> out;
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = pts[loop[i]];
            const Point2 b = pts[loop[(i + 1) % n]];
            out.push_back(loop[i]);
            const double len = distance(a, b);
            std::vector<std::pair<double, int>> inner;
            for (std::size_t v = 0; v < pts.size(); ++v) {
                const int vi = static_cast<int>(v);
                if (vi == loop[i] || vi == loop[(i + 1) % n])
                    continue;
                const double t = dot(pts[v] - a, b - a) / (len * len);
                if (t * len <= tol_len || (1.0 - t) * len <= tol_len)
                    continue;
                if (point_segment_distance(pts[v], a, b) <= tol_len)
                    inner.emplace_back(t, vi);
            }
            std::sort(inner.begin(), inner.end());
            for (const auto& [t, v] : inner)
                out.push_back(v);
        }
        loop = std::move(out);
    }

    for (const auto& loop : loops)
        mesh.add_cell(0, loop);

    for (int e : mesh.active_edges()) {
        auto& ed = mesh.edge(e);
        if (ed.cells.size() > 2)
            throw MeshError("build_mesh: edge shared by more than two cells (overlap)");
        if (ed.cells.size() != 1)
            continue;
        const Point2 a = mesh.local_point(ed.vertices[0], 0);
        const Point2 b = mesh.local_point(ed.vertices[1], 0);
        const BoundaryLabel label = rule ? rule(a, b) : BoundaryLabel::dirichlet;
        if (label == BoundaryLabel::interior) {
            std::ostringstream msg;
            msg << "build_mesh: unmatched edge (" << a.x << "," << a.y << ")-(" << b.x << "," << b.y
                << ") is not on the domain boundary (gap)";
            throw MeshError(msg.str());
        }
        ed.label = label;
    }
    return mesh;
}

AlignedGroup aligned_group(const Mesh& mesh, int cell, int edge)
{
    const auto& c = mesh.cell(cell);
    const std::size_t n = c.edges.size();
    const std::size_t pos = mesh.loop_position(cell, edge);
    // Vertex i separates edge i-1 and edge i.
    std::size_t back = 0;
    while (back + 1 < n && collinear_at(c.polygon, (pos + n - back) % n))
        ++back;
    std::size_t fwd = 0;
    while (back + fwd + 1 < n && collinear_at(c.polygon, (pos + fwd + 1) % n))
        ++fwd;
    AlignedGroup g;
    g.cell = cell;
    for (std::size_t k = 0; k <= back + fwd; ++k) {
        const int e = c.edges[(pos + n - back + k) % n];
        g.edges.push_back(e);
        g.total_length += mesh.edge_length(e);
    }
    g.count = static_cast<int>(g.edges.size());
    return g;
}

Polygon unify_aligned(const Mesh& mesh, int cell)
{
    return remove_collinear_vertices(mesh.cell(cell).polygon);
}

Distribution describe(std::vector<double> v)
{
    Distribution d;
    if (v.empty())
        return d;
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    d.min = v.front();
    d.max = v.back();
    d.q1 = quantile(0.25);
    d.median = quantile(0.5);
    d.q3 = quantile(0.75);
    double s = 0.0;
    for (double x : v)
        s += x;
    d.mean = s / static_cast<double>(v.size());
    return d;
}

MeshQualityReport quality_report(const Mesh& mesh, std::size_t dof_count)
{
    MeshQualityReport rep;
    rep.dofs = dof_count;
    std::vector<double> hs, rs, rhos;
    rep.gamma_r = std::numeric_limits<double>::infinity();
    rep.gamma_h = std::numeric_limits<double>::infinity();
    for (int c : mesh.active_cells()) {
        const auto& cell = mesh.cell(c);
        const auto& g = cell.geometry;
        ++rep.cells;
        rep.ar_rr.push_back(g.R / g.r);
        rep.ar_rh.push_back(g.R / g.h);
        hs.push_back(g.h);
        rs.push_back(g.r);
        rhos.push_back(std::min(g.h, g.r));
        rep.gamma_r = std::min(rep.gamma_r, g.r / g.diameter);
        rep.gamma_h = std::min(rep.gamma_h, g.h / g.diameter);
        rep.max_vertices = std::max(rep.max_vertices, g.n);
        if (g.n == 3)
            ++rep.n_tri;
        else if (g.n == 4)
            ++rep.n_quad;
        const auto corners = mesh.corner_positions(c);
        if (corners.size() == 3)
            ++rep.n_tri_al;
        else if (corners.size() == 4)
            ++rep.n_quad_al;
        // Group length ratios: runs between consecutive corners.
        const std::size_t n = cell.edges.size();
        for (std::size_t k = 0; k < corners.size(); ++k) {
            const std::size_t from = corners[k];
            const std::size_t to = corners[(k + 1) % corners.size()];
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (std::size_t i = from; i != to; i = (i + 1) % n) {
                const double len = mesh.edge_length(cell.edges[i]);
                lo = std::min(lo, len);
                hi = std::max(hi, len);
            }
            if (hi > 0.0)
                rep.max_aligned_ratio = std::max(rep.max_aligned_ratio, hi / lo);
        }
    }
    if (rep.cells == 0)
        return rep;
    const double nc = static_cast<double>(rep.cells);
    rep.r_tri = static_cast<double>(rep.n_tri) / nc;
    rep.r_quad = static_cast<double>(rep.n_quad) / nc;
    rep.r_poly = 1.0 - (rep.r_tri + rep.r_quad);
    rep.r_tri_al = static_cast<double>(rep.n_tri_al) / nc;
    rep.r_quad_al = static_cast<double>(rep.n_quad_al) / nc;
    if (dof_count > 0) {
        rep.ef = nc / static_cast<double>(dof_count);
        rep.ef_inv = static_cast<double>(dof_count) / nc;
    }
    rep.ar_rr_stats = describe(rep.ar_rr);
    rep.ar_rh_stats = describe(rep.ar_rh);
    rep.h_stats = describe(hs);
    rep.r_stats = describe(rs);
    rep.rho_stats = describe(rhos);
    return rep;
}

std::string check_consistency(const Mesh& mesh)
{
    std::ostringstream err;
    for (int c : mesh.active_cells()) {
        const auto& cell = mesh.cell(c);
        const std::size_t n = cell.vertices.size();
        if (cell.edges.size() != n)
            return "cell " + std::to_string(c) + ": loop size mismatch";
        for (std::size_t i = 0; i < n; ++i) {
            const auto& ed = mesh.edge(cell.edges[i]);
            const int a = cell.vertices[i];
            const int b = cell.vertices[(i + 1) % n];
            if (!ed.active)
                return "cell " + std::to_string(c) + " references inactive edge " + std::to_string(cell.edges[i]);
            if (!((ed.vertices[0] == a && ed.vertices[1] == b) || (ed.vertices[0] == b && ed.vertices[1] == a)))
                return "cell " + std::to_string(c) + ": edge endpoints disagree with loop";
            if (std::find(ed.cells.begin(), ed.cells.end(), c) == ed.cells.end())
                return "cell " + std::to_string(c) + " missing from N_e of edge " + std::to_string(cell.edges[i]);
        }
        if (!is_convex(cell.polygon))
            return "cell " + std::to_string(c) + " is not convex";
    }
    for (int e : mesh.active_edges()) {
        const auto& ed = mesh.edge(e);
        if (ed.cells.empty())
            return "edge " + std::to_string(e) + " has no neighbours";
        if (ed.cells.size() > 2 && ed.trace_id < 0)
            return "edge " + std::to_string(e) + " has more than two neighbours off a trace";
        for (int c : ed.cells) {
            if (!mesh.cell(c).active)
                return "edge " + std::to_string(e) + " lists inactive cell " + std::to_string(c);
            const auto& loop = mesh.cell(c).edges;
            if (std::find(loop.begin(), loop.end(), e) == loop.end())
                return "edge " + std::to_string(e) + " lists cell " + std::to_string(c) + " not containing it";
        }
    }
    return {};
}

} // namespace vemref
