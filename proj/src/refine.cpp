#include "vemref/refine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace vemref {

namespace {

std::size_t first_longest_edge(const Polygon& p)
{
    double longest = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        longest = std::max(longest, distance(p[i], p.next(i)));
    for (std::size_t i = 0; i < p.size(); ++i)
        if (distance(p[i], p.next(i)) >= longest * (1.0 - 1e-12))
            return i;
    return 0;
}

Vec2 normalize_sign(Vec2 d)
{
    d = d / norm(d);
    // Drop round-off components so axis-aligned directions normalize consistently.
    if (std::abs(d.x) < 1e-14)
        d.x = 0.0;
    if (std::abs(d.y) < 1e-14)
        d.y = 0.0;
    if (d.x < 0.0 || (d.x == 0.0 && d.y < 0.0))
        d = -1.0 * d;
    return d;
}

ChordEnd locate(const Polygon& poly, const Point2& p)
{
    const double tol_len = tol::length_rel * polygon_diameter(poly);
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (distance(poly[i], p) <= tol_len)
            return {i, 0.0};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2 a = poly[i], b = poly.next(i);
        if (point_segment_distance(p, a, b) <= tol_len) {
            const Vec2 ab = b - a;
            return {i, dot(p - a, ab) / dot(ab, ab)};
        }
    }
    throw GeometryError("chord point is not on the cell boundary");
}

} // namespace

CutLine max_momentum(const Polygon& e_hat, int newest)
{
    CutLine cut;
    if (e_hat.size() == 3) {
        int apex = newest;
        if (apex < 0 || apex > 2)
            apex = static_cast<int>((first_longest_edge(e_hat) + 2) % 3);
        const auto i = static_cast<std::size_t>(apex);
        cut.nvb = true;
        cut.apex = e_hat[i];
        cut.target = 0.5 * (e_hat[(i + 1) % 3] + e_hat[(i + 2) % 3]);
        cut.point = cut.apex;
        cut.dir = normalize_sign(cut.target - cut.apex);
        return cut;
    }
    const auto g = compute_cell_geometry(e_hat);
    const auto axes = principal_axes(g.inertia);
    cut.point = g.centroid;
    if (axes.tie) {
        const std::size_t i = first_longest_edge(e_hat);
        cut.dir = normalize_sign(perp(e_hat.next(i) - e_hat[i]));
    } else {
        cut.dir = normalize_sign(axes.v_max);
    }
    return cut;
}

bool check_quality(const Mesh& mesh, int cell, int edge, int s, const RefinementParams& params)
{
    mesh.loop_position(cell, edge); // throws when the edge is not on the cell
    if (s < 1)
        throw MeshError("check_quality: s must be positive");
    const double len = mesh.edge_length(edge);
    const double keep = 1.0 - quality_slack;
    double rho = 0.0;
    for (int n : mesh.edge(edge).cells) {
        const auto& g = mesh.cell(n).geometry;
        rho = std::max(rho, std::min(g.h, g.r));
    }
    if (len < params.c_rho * rho * s * keep)
        return false;
    double group = 0.0;
    for (int n : mesh.edge(edge).cells) {
        const auto g = aligned_group(mesh, n, edge);
        group = std::max(group, g.total_length / (g.count + (s - 1)));
    }
    return !(len < params.c_al * group * s * keep);
}

Chord smooth_direction(const Mesh& mesh, int c, const CutLine& cut, const RefinementParams& params)
{
    const auto& cell = mesh.cell(c);
    if (cut.nvb && mesh.corner_positions(c).size() == 3) {
        Chord chord{locate(cell.polygon, cut.apex), locate(cell.polygon, cut.target), true};
        if (mesh.chord_is_valid(c, chord.a, chord.b))
            return chord;
    }

    const Point2 origin = cut.nvb ? 0.5 * (cut.apex + cut.target) : cut.point;
    const auto hits = line_polygon_intersection(cell.polygon, origin, cut.dir);
    const std::size_t n = cell.polygon.size();
    auto raw = [&](const LineHit& h) { return h.on_vertex() ? ChordEnd{h.vertex(n), 0.0} : ChordEnd{h.edge, h.t}; };
    auto smoothed = [&](const LineHit& h) {
        if (h.on_vertex())
            return ChordEnd{h.vertex(n), 0.0};
        if (check_quality(mesh, c, cell.edges[h.edge], 2, params))
            return ChordEnd{h.edge, 0.5};
        return h.t <= 0.5 ? ChordEnd{h.edge, 0.0} : ChordEnd{(h.edge + 1) % n, 0.0};
    };
    auto midpoint = [&](const LineHit& h) { return h.on_vertex() ? ChordEnd{h.vertex(n), 0.0} : ChordEnd{h.edge, 0.5}; };

    const Chord candidates[] = {
        {smoothed(hits[0]), smoothed(hits[1])},
        {midpoint(hits[0]), midpoint(hits[1])},
        {raw(hits[0]), raw(hits[1])},
    };
    for (const auto& chord : candidates)
        if (mesh.chord_is_valid(c, chord.a, chord.b))
            return chord;
    return candidates[2];
}

RefineOutcome refine(Mesh& mesh, const std::vector<int>& marked, const RefinementParams& params)
{
    RefineOutcome out;
    std::vector<int> initial = marked;
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
    out.to_refine = initial;

    std::deque<std::pair<int, bool>> work;
    std::unordered_set<int> queued;
    for (int c : initial) {
        if (!mesh.cell(c).active)
            throw MeshError("refine: marked cell " + std::to_string(c) + " is inactive");
        work.emplace_back(c, false);
        queued.insert(c);
    }

    const std::size_t max_splits = 10 * mesh.active_cell_count() + 100;
    while (!work.empty()) {
        const auto [c, extension] = work.front();
        work.pop_front();
        if (!mesh.cell(c).active)
            continue;
        if (out.refined.size() >= max_splits) {
            out.truncated = true;
            break;
        }

        const auto& cell = mesh.cell(c);
        const auto corners = mesh.corner_positions(c);
        Polygon e_hat;
        int newest = -1;
        for (std::size_t k = 0; k < corners.size(); ++k) {
            e_hat.vertices.push_back(cell.polygon[corners[k]]);
            if (cell.vertices[corners[k]] == cell.newest_vertex)
                newest = static_cast<int>(k);
        }
        const CutLine cut = max_momentum(e_hat, newest);
        const Chord chord = smooth_direction(mesh, c, cut, params);

        SplitRecord rec;
        rec.cell = c;
        rec.a = mesh.chord_point(c, chord.a);
        rec.b = mesh.chord_point(c, chord.b);
        rec.nvb = chord.nvb;
        rec.extension = extension;
        rec.parent_vertices = cell.vertices.size();
        const CellSplit split = mesh.split_cell(c, chord.a, chord.b);
        rec.child1 = split.child1;
        rec.child2 = split.child2;
        rec.child_vertices = {mesh.cell(split.child1).vertices.size(), mesh.cell(split.child2).vertices.size()};
        if (chord.nvb) {
            const int mid = mesh.edge(split.chord_edge).vertices[1];
            mesh.set_newest_vertex(split.child1, mid);
            mesh.set_newest_vertex(split.child2, mid);
        }
        out.refined.push_back(c);
        if (extension)
            out.extended.push_back(c);
        out.splits.push_back(rec);

        // Neighbours across the edges this split has just created and marked.
        std::vector<int> q_cells;
        for (int e : split.split_edges)
            for (int nb : mesh.edge(e).cells)
                if (nb != split.child1 && nb != split.child2 &&
                    std::find(q_cells.begin(), q_cells.end(), nb) == q_cells.end())
                    q_cells.push_back(nb);
        for (int q : q_cells) {
            if (!mesh.cell(q).active)
                continue;
            bool failed = false;
            for (int e : std::vector<int>(mesh.cell(q).edges)) {
                if (!mesh.edge(e).marked)
                    continue;
                if (check_quality(mesh, q, e, 1, params))
                    mesh.edge(e).marked = false;
                else
                    failed = true;
            }
            if (failed && queued.insert(q).second)
                work.emplace_back(q, true);
        }
    }

    for (int e : mesh.active_edges())
        mesh.edge(e).marked = false;
    return out;
}

} // namespace vemref
