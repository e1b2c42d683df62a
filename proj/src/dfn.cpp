#include "vemref/dfn.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

namespace vemref {

namespace {

Point3 unit(const Point3& a)
{
    return (1.0 / norm(a)) * a;
}

double point_segment_distance3(const Point3& p, const Point3& a, const Point3& b)
{
    const Point3 d = b - a;
    const double l2 = dot(d, d);
    double t = l2 > 0 ? dot(p - a, d) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * d);
}

struct Interval {
    double lo, hi;
};

/// Parameter range of the line o + s * dir inside a convex polygon, if any.
std::optional<Interval> clip_line(const Polygon& poly, const Point2& o, const Vec2& dir)
{
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly.next(i);
        // Inside: cross(b - a, p - a) >= 0.
        const Vec2 e = b - a;
        const double num = cross(e, o - a);
        const double den = cross(e, dir);
        if (den == 0.0) {
            if (num < 0.0)
                return std::nullopt;
            continue;
        }
        const double s = -num / den;
        if (den > 0.0)
            lo = std::max(lo, s);
        else
            hi = std::min(hi, s);
    }
    if (lo > hi)
        return std::nullopt;
    return Interval{lo, hi};
}

std::vector<Interval> merge(std::vector<Interval> iv, double tol)
{
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : iv) {
        if (!out.empty() && i.lo <= out.back().hi + tol)
            out.back().hi = std::max(out.back().hi, i.hi);
        else
            out.push_back(i);
    }
    return out;
}

double overlap_area(const Polygon& a, const Polygon& b)
{
    Polygon p = a;
    for (std::size_t i = 0; i < b.size() && p.size() >= 3; ++i) {
        const Point2 s = b[i], e = b.next(i);
        Polygon out;
        const std::size_t n = p.size();
        for (std::size_t j = 0; j < n; ++j) {
            const Point2 c = p[j], d = p.next(j);
            const double dc = cross(e - s, c - s), dd = cross(e - s, d - s);
            if (dc >= 0)
                out.vertices.push_back(c);
            if ((dc > 0 && dd < 0) || (dc < 0 && dd > 0))
                out.vertices.push_back(c + (dc / (dc - dd)) * (d - c));
        }
        p = std::move(out);
    }
    return p.size() >= 3 ? signed_area(p.vertices) : 0.0;
}

/// Splits convex cells crossed by the segment a-b; a crossing chord is used in
/// full, which extends a tip lying inside the cell to the cell boundary.
std::vector<Polygon> cut_cells(const std::vector<Polygon>& cells, const Point2& a, const Point2& b, double tol)
{
    const double L = distance(a, b);
    const Vec2 dh = (1.0 / L) * (b - a);
    std::vector<Polygon> out;
    for (const Polygon& poly : cells) {
        const std::size_t n = poly.size();
        std::vector<double> s(n);
        double smin = std::numeric_limits<double>::infinity(), smax = -smin;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = cross(dh, poly[i] - a);
            if (std::abs(s[i]) <= tol)
                s[i] = 0.0;
            smin = std::min(smin, s[i]);
            smax = std::max(smax, s[i]);
        }
        if (smin >= 0.0 || smax <= 0.0) {
            out.push_back(poly);
            continue;
        }
        Polygon left, right;
        double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            if (s[i] >= 0.0)
                left.vertices.push_back(poly[i]);
            if (s[i] <= 0.0)
                right.vertices.push_back(poly[i]);
            if (s[i] == 0.0) {
                const double t = dot(poly[i] - a, dh);
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
            }
            if ((s[i] < 0.0 && s[j] > 0.0) || (s[i] > 0.0 && s[j] < 0.0)) {
                const Point2 p = poly[i] + (s[i] / (s[i] - s[j])) * (poly[j] - poly[i]);
                left.vertices.push_back(p);
                right.vertices.push_back(p);
                const double t = dot(p - a, dh);
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
            }
        }
        if (std::min(tmax, L) - std::max(tmin, 0.0) <= tol) {
            out.push_back(poly);
            continue;
        }
        out.push_back(std::move(left));
        out.push_back(std::move(right));
    }
    return out;
}

BoundaryLabel label_of(const std::string& s, const std::string& where)
{
    if (s == "dirichlet")
        return BoundaryLabel::dirichlet;
    if (s == "neumann")
        return BoundaryLabel::neumann;
    throw NetworkError(where + ": boundary type must be \"dirichlet\" or \"neumann\", got \"" + s + "\"");
}

double coord(const Point3& p, int axis)
{
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

} // namespace

Polygon Fracture::local_polygon() const
{
    Polygon p;
    for (const auto& v : vertices)
        p.vertices.push_back(frame.to_local(v));
    return p;
}

Frame fracture_frame(const std::vector<Point3>& vs, double tol_len)
{
    const std::size_t n = vs.size();
    if (n < 3)
        throw NetworkError("fracture needs at least three vertices");
    Point3 nrm;
    for (std::size_t i = 0; i < n; ++i) {
        const Point3& a = vs[i];
        const Point3& b = vs[(i + 1) % n];
        nrm.x += (a.y - b.y) * (a.z + b.z);
        nrm.y += (a.z - b.z) * (a.x + b.x);
        nrm.z += (a.x - b.x) * (a.y + b.y);
    }
    if (norm(nrm) <= tol_len * tol_len)
        throw NetworkError("fracture polygon is degenerate (zero area)");
    Frame f;
    f.origin = vs[0];
    f.normal = unit(nrm);
    std::size_t i1 = 1;
    while (i1 < n && distance(vs[i1], vs[0]) <= tol_len)
        ++i1;
    if (i1 == n)
        throw NetworkError("fracture polygon is degenerate (coincident vertices)");
    Point3 u = vs[i1] - vs[0];
    u = u - dot(u, f.normal) * f.normal;
    f.u = unit(u);
    f.v = cross(f.normal, f.u);
    // Planarity is judged against the plane of the first non-degenerate corner,
    // so the reported vertex is the first one that leaves it.
    Point3 ref = f.normal;
    for (std::size_t k = i1 + 1; k < n; ++k) {
        const Point3 c = cross(vs[i1] - vs[0], vs[k] - vs[0]);
        if (norm(c) > tol_len * distance(vs[i1], vs[0])) {
            ref = unit(c);
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double off = std::abs(dot(vs[i] - f.origin, ref));
        if (off > tol_len) {
            std::ostringstream msg;
            msg << "vertex " << i << " (" << vs[i].x << ", " << vs[i].y << ", " << vs[i].z
                << ") is off the fracture plane by " << off;
            throw NetworkError(msg.str());
        }
    }
    return f;
}

std::vector<Trace> compute_traces(const std::vector<Fracture>& fr, double tol_len)
{
    std::vector<Trace> traces;
    std::vector<std::vector<Polygon>> pieces;
    for (const auto& f : fr)
        pieces.push_back(convex_decomposition(f.local_polygon()));
    for (std::size_t i = 0; i < fr.size(); ++i)
        for (std::size_t j = i + 1; j < fr.size(); ++j) {
            const Frame& A = fr[i].frame;
            const Frame& B = fr[j].frame;
            const Point3 d = cross(A.normal, B.normal);
            if (norm(d) < 1e-12) {
                if (std::abs(dot(B.origin - A.origin, A.normal)) > tol_len)
                    continue; // parallel and disjoint
                // Coplanar: reject any overlap of positive area.
                Polygon pb;
                for (const auto& w : fr[j].vertices)
                    pb.vertices.push_back(A.to_local(w));
                if (signed_area(pb.vertices) < 0)
                    std::reverse(pb.vertices.begin(), pb.vertices.end());
                const auto qb = convex_decomposition(pb);
                double area = 0.0;
                for (const auto& pa : pieces[i])
                    for (const auto& q : qb)
                        area += overlap_area(pa, q);
                if (area > tol_len * tol_len)
                    throw NetworkError("fractures " + std::to_string(fr[i].id) + " and " + std::to_string(fr[j].id) +
                                       " are coplanar and overlap");
                continue;
            }
            const Point3 dh = unit(d);
            const double hA = dot(A.normal, A.origin), hB = dot(B.normal, B.origin);
            const Point3 p0 = (1.0 / dot(d, d)) * (hA * cross(B.normal, d) + hB * cross(d, A.normal));
            auto intervals = [&](std::size_t f) {
                const Frame& F = fr[f].frame;
                const Point2 o = F.to_local(p0);
                const Vec2 dir{dot(dh, F.u), dot(dh, F.v)};
                std::vector<Interval> iv;
                for (const auto& p : pieces[f])
                    if (auto c = clip_line(p, o, dir))
                        iv.push_back(*c);
                return merge(iv, tol_len);
            };
            const auto ia = intervals(i), ib = intervals(j);
            for (const auto& x : ia)
                for (const auto& y : ib) {
                    const double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
                    if (hi - lo <= tol_len)
                        continue;
                    Trace t;
                    t.id = static_cast<int>(traces.size());
                    t.a = p0 + lo * dh;
                    t.b = p0 + hi * dh;
                    t.fractures = {static_cast<int>(i), static_cast<int>(j)};
                    t.local[0] = {A.to_local(t.a), A.to_local(t.b)};
                    t.local[1] = {B.to_local(t.a), B.to_local(t.b)};
                    traces.push_back(t);
                }
        }
    return traces;
}

void prepare_network(FractureNetwork& net)
{
    if (net.fractures.empty())
        throw NetworkError("network has no fractures");
    double lo[3] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
    double hi[3] = {-lo[0], -lo[1], -lo[2]};
    for (const auto& f : net.fractures)
        for (const auto& v : f.vertices)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], coord(v, a));
                hi[a] = std::max(hi[a], coord(v, a));
            }
    net.tol_len = tol::length_rel * std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) + (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                              (hi[2] - lo[2]) * (hi[2] - lo[2]));
    for (auto& f : net.fractures) {
        if (!(f.K > 0.0))
            throw NetworkError("fracture " + std::to_string(f.id) + ": transmissivity must be positive");
        try {
            f.frame = fracture_frame(f.vertices, net.tol_len);
        } catch (const NetworkError& e) {
            throw NetworkError("fracture " + std::to_string(f.id) + ": " + e.what());
        }
        if (!(signed_area(f.local_polygon().vertices) > 0.0))
            throw NetworkError("fracture " + std::to_string(f.id) + ": polygon is not simple");
    }
    net.traces = compute_traces(net.fractures, net.tol_len);
}

Mesh build_minimal_dfn_mesh(const FractureNetwork& net)
{
    const double tol = net.tol_len;
    Mesh mesh;
    for (const auto& f : net.fractures)
        mesh.add_fracture(f.frame);

    std::vector<std::vector<Polygon>> cells(net.fractures.size());
    for (std::size_t f = 0; f < net.fractures.size(); ++f)
        cells[f] = convex_decomposition(net.fractures[f].local_polygon());
    for (const auto& t : net.traces)
        for (int side = 0; side < 2; ++side) {
            const int f = t.fractures[side];
            cells[f] = cut_cells(cells[f], t.local[side][0], t.local[side][1], tol);
        }

    // Unify nodes by 3D position.
    std::map<std::array<long long, 3>, std::vector<int>> grid;
    std::vector<Point3> pts;
    auto key_of = [&](const Point3& p) {
        return std::array<long long, 3>{static_cast<long long>(std::floor(p.x / tol)),
                                        static_cast<long long>(std::floor(p.y / tol)),
                                        static_cast<long long>(std::floor(p.z / tol))};
    };
    auto vertex_for = [&](const Point3& p) {
        const auto k = key_of(p);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == grid.end())
                        continue;
                    for (int v : it->second)
                        if (distance(pts[v], p) <= tol)
                            return v;
                }
        const int v = mesh.add_vertex(p);
        pts.push_back(p);
        grid[k].push_back(v);
        return v;
    };

    struct Loop {
        int fracture;
        std::vector<int> vertices;
    };
    std::vector<Loop> loops;
    for (std::size_t f = 0; f < cells.size(); ++f)
        for (const Polygon& poly : cells[f]) {
            Loop l{static_cast<int>(f), {}};
            for (const auto& p : poly.vertices) {
                const int v = vertex_for(net.fractures[f].frame.to_global(p));
                if (l.vertices.empty() || (l.vertices.back() != v && l.vertices.front() != v))
                    l.vertices.push_back(v);
            }
            loops.push_back(std::move(l));
        }

    // Nodes lying inside an edge (same-fracture T-junctions and the other side's trace nodes).
    for (auto& l : loops) {
        std::vector<int> out;
        const std::size_t n = l.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point3 a = pts[l.vertices[i]], b = pts[l.vertices[(i + 1) % n]];
            const double len = distance(a, b);
            out.push_back(l.vertices[i]);
            std::vector<std::pair<double, int>> inner;
            for (std::size_t v = 0; v < pts.size(); ++v) {
                const int vi = static_cast<int>(v);
                if (vi == l.vertices[i] || vi == l.vertices[(i + 1) % n])
                    continue;
                const double t = dot(pts[v] - a, b - a) / (len * len);
                if (t * len <= tol || (1.0 - t) * len <= tol)
                    continue;
                if (point_segment_distance3(pts[v], a, b) <= tol)
                    inner.emplace_back(t, vi);
            }
            std::sort(inner.begin(), inner.end());
            for (const auto& [t, v] : inner)
                out.push_back(v);
        }
        l.vertices = std::move(out);
    }

    for (const auto& l : loops)
        mesh.add_cell(l.fracture, l.vertices);

    for (int e : mesh.active_edges()) {
        auto& ed = mesh.edge(e);
        const Point3 a = pts[ed.vertices[0]], b = pts[ed.vertices[1]];
        for (const auto& t : net.traces)
            if (point_segment_distance3(a, t.a, t.b) <= tol && point_segment_distance3(b, t.a, t.b) <= tol) {
                ed.trace_id = t.id;
                break;
            }
        std::map<int, int> per_fracture;
        for (int c : ed.cells)
            ++per_fracture[mesh.cell(c).fracture];
        for (const auto& [f, count] : per_fracture)
            if (count > 2)
                throw MeshError("build_minimal_dfn_mesh: edge shared by more than two cells of one fracture");
        if (ed.cells.size() != 1)
            continue;
        const Fracture& fr = net.fractures[mesh.cell(ed.cells[0]).fracture];
        ed.label = fr.default_label;
        for (const auto& sel : fr.boundary)
            if (std::abs(coord(a, sel.axis) - sel.value) <= tol && std::abs(coord(b, sel.axis) - sel.value) <= tol) {
                ed.label = sel.label;
                break;
            }
    }
    return mesh;
}

std::string check_conformity(const Mesh& mesh, const FractureNetwork& net)
{
    const double tol = net.tol_len;
    for (const auto& t : net.traces) {
        const double L = distance(t.a, t.b);
        std::array<std::vector<double>, 2> params;
        for (int side = 0; side < 2; ++side) {
            std::vector<char> seen(mesh.vertex_count(), 0);
            for (int c : mesh.active_cells()) {
                if (mesh.cell(c).fracture != t.fractures[side])
                    continue;
                for (int v : mesh.cell(c).vertices) {
                    if (seen[v])
                        continue;
                    const Point3 p = mesh.vertex(v).position;
                    if (point_segment_distance3(p, t.a, t.b) <= tol) {
                        seen[v] = 1;
                        params[side].push_back(dot(p - t.a, t.b - t.a) / L);
                    }
                }
            }
            std::sort(params[side].begin(), params[side].end());
        }
        std::ostringstream msg;
        if (params[0].size() != params[1].size()) {
            msg << "trace " << t.id << ": " << params[0].size() << " nodes on fracture " << net.fractures[t.fractures[0]].id
                << ", " << params[1].size() << " on fracture " << net.fractures[t.fractures[1]].id;
            return msg.str();
        }
        for (std::size_t i = 0; i < params[0].size(); ++i)
            if (std::abs(params[0][i] - params[1][i]) > tol) {
                msg << "trace " << t.id << ": node " << i << " at " << params[0][i] << " vs " << params[1][i];
                return msg.str();
            }
        if (params[0].size() < 2) {
            msg << "trace " << t.id << ": endpoints are not mesh nodes";
            return msg.str();
        }
    }
    return {};
}

FieldJet evaluate(const Expression& expr, const Fracture& f, const Point2& q)
{
    const Frame& F = f.frame;
    const Point3 g = F.to_global(q);
    Expression::Variables vars;
    vars.u = {q.x, {1.0, 0.0}, {}};
    vars.v = {q.y, {0.0, 1.0}, {}};
    vars.x = {g.x, {F.u.x, F.v.x}, {}};
    vars.y = {g.y, {F.u.y, F.v.y}, {}};
    vars.z = {g.z, {F.u.z, F.v.z}, {}};
    const Jet2 j = expr.eval(vars);
    return {j.v, {j.d[0], j.d[1]}, j.laplacian()};
}

Problem manufactured_problem(const FractureNetwork& net)
{
    Problem pr;
    bool all_exact = true;
    for (const auto& f : net.fractures) {
        FractureData d;
        d.K = f.K;
        if (!f.solution.empty()) {
            const Expression U = f.solution;
            const Fracture fr = f;
            const double K = f.K;
            d.source = [U, fr, K](const Point2& p) { return -K * evaluate(U, fr, p).laplacian; };
            d.dirichlet = [U, fr](const Point2& p) { return evaluate(U, fr, p).value; };
            pr.exact.push_back({[U, fr](const Point2& p) { return evaluate(U, fr, p).value; },
                                [U, fr](const Point2& p) { return evaluate(U, fr, p).grad; }});
        } else {
            all_exact = false;
            const Fracture fr = f;
            if (!f.source.empty()) {
                const Expression Q = f.source;
                d.source = [Q, fr](const Point2& p) { return evaluate(Q, fr, p).value; };
            }
            if (!f.dirichlet.empty()) {
                const Expression G = f.dirichlet;
                d.dirichlet = [G, fr](const Point2& p) { return evaluate(G, fr, p).value; };
            }
        }
        pr.fractures.push_back(std::move(d));
    }
    if (!all_exact)
        pr.exact.clear();
    return pr;
}

namespace {

using nlohmann::json;

std::string line_context(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, start = 0;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
        if (text[i] == '\n') {
            ++line;
            start = i + 1;
        }
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos)
        end = text.size();
    std::ostringstream msg;
    msg << "line " << line << ", column " << (byte - start + 1) << ":\n  " << text.substr(start, end - start);
    return msg.str();
}

Point3 read_point(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 3)
        throw NetworkError(where + ": expected [x, y, z]");
    for (const auto& c : j)
        if (!c.is_number())
            throw NetworkError(where + ": coordinates must be numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Expression read_expression(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
        return {};
    if (!obj[key].is_string())
        throw NetworkError(where + "." + key + ": expected a string expression");
    try {
        return Expression(obj[key].get<std::string>());
    } catch (const ExpressionError& e) {
        throw NetworkError(where + "." + key + ": " + e.what());
    }
}

} // namespace

FractureNetwork parse_network(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw NetworkError("malformed network file at " + line_context(text, e.byte > 0 ? e.byte - 1 : 0) + "\n" +
                           e.what());
    }
    if (!doc.is_object() || !doc.contains("fractures") || !doc["fractures"].is_array())
        throw NetworkError("network file needs a \"fractures\" array");
    FractureNetwork net;
    BoundaryLabel def = BoundaryLabel::dirichlet;
    if (doc.contains("default_boundary"))
        def = label_of(doc["default_boundary"].get<std::string>(), "default_boundary");
    const std::regex where_re(R"(^\s*([xyz])\s*=\s*([-+]?[0-9]*\.?[0-9]+([eE][-+]?[0-9]+)?)\s*$)");
    int index = 0;
    for (const auto& jf : doc["fractures"]) {
        const std::string where = "fractures[" + std::to_string(index) + "]";
        if (!jf.is_object())
            throw NetworkError(where + ": expected an object");
        Fracture f;
        f.id = jf.value("id", index);
        if (!jf.contains("vertices") || !jf["vertices"].is_array())
            throw NetworkError(where + ": missing \"vertices\" array");
        int vi = 0;
        for (const auto& jv : jf["vertices"])
            f.vertices.push_back(read_point(jv, where + ".vertices[" + std::to_string(vi++) + "]"));
        if (jf.contains("K"))
            f.K = jf["K"].get<double>();
        else if (jf.contains("transmissivity"))
            f.K = jf["transmissivity"].get<double>();
        f.default_label = jf.contains("default_boundary")
                              ? label_of(jf["default_boundary"].get<std::string>(), where + ".default_boundary")
                              : def;
        if (jf.contains("boundary")) {
            int bi = 0;
            for (const auto& jb : jf["boundary"]) {
                const std::string bw = where + ".boundary[" + std::to_string(bi++) + "]";
                std::smatch m;
                const std::string pred = jb.value("where", "");
                if (!std::regex_match(pred, m, where_re))
                    throw NetworkError(bw + ": predicate must look like \"x = 0.0\", got \"" + pred + "\"");
                BoundarySelector s;
                s.axis = m[1].str()[0] - 'x';
                s.value = std::stod(m[2].str());
                s.label = label_of(jb.value("type", "dirichlet"), bw);
                f.boundary.push_back(s);
            }
        }
        f.solution = read_expression(jf, "solution", where);
        f.source = read_expression(jf, "source", where);
        f.dirichlet = read_expression(jf, "dirichlet", where);
        net.fractures.push_back(std::move(f));
        ++index;
    }
    prepare_network(net);
    return net;
}

FractureNetwork load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw NetworkError("cannot read network file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_network(ss.str());
    } catch (const NetworkError& e) {
        throw NetworkError(path + ": " + e.what());
    }
}

} // namespace vemref
