#include "vemref/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace vemref {

namespace {

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Viridis samples at 0, 1/8, ..., 1.
constexpr std::array<std::array<int, 3>, 9> viridis{{{68, 1, 84},
                                                     {71, 44, 122},
                                                     {59, 81, 139},
                                                     {44, 113, 142},
                                                     {33, 144, 141},
                                                     {39, 173, 129},
                                                     {92, 200, 99},
                                                     {170, 220, 50},
                                                     {253, 231, 37}}};

std::string color(double t)
{
    t = std::clamp(std::isnan(t) ? 0.0 : t, 0.0, 1.0) * 8.0;
    const int i = std::min(static_cast<int>(t), 7);
    const double f = t - i;
    char buf[8];
    int c[3];
    for (int k = 0; k < 3; ++k)
        c[k] = static_cast<int>(std::lround(viridis[i][k] + f * (viridis[i + 1][k] - viridis[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

double log_eta(const std::vector<double>& eta2, int c)
{
    const double v = c < static_cast<int>(eta2.size()) ? eta2[c] : 0.0;
    return v > 0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

std::string csv_header()
{
    std::string h = "m,dofs,cells,eta_rel,energy_err,effectivity,alpha,R_tri,R_quad,R_poly,R_tri_al,R_quad_al,Ef_inv";
    for (const char* q : {"ar_Rr", "ar_Rh"})
        for (const char* s : {"min", "q1", "med", "q3", "max", "avg"})
            h += std::string(",") + q + "_" + s;
    h += ",rho_E_avg,h_E_avg,r_E_avg,n_marked,n_refined,n_extended,t_solve,t_estimate,t_mark,t_refine";
    return h;
}

std::string csv_row(const IterationRecord& r)
{
    const auto& q = r.quality;
    std::ostringstream s;
    s << r.m << ',' << r.dofs << ',' << r.cells << ',' << num(r.eta_rel) << ',' << num(r.error_rel) << ','
      << num(r.effectivity) << ',' << num(r.alpha) << ',' << num(q.r_tri) << ',' << num(q.r_quad) << ','
      << num(q.r_poly) << ',' << num(q.r_tri_al) << ',' << num(q.r_quad_al) << ',' << num(q.ef_inv);
    for (const Distribution* d : {&q.ar_rr_stats, &q.ar_rh_stats})
        s << ',' << num(d->min) << ',' << num(d->q1) << ',' << num(d->median) << ',' << num(d->q3) << ','
          << num(d->max) << ',' << num(d->mean);
    s << ',' << num(q.rho_stats.mean) << ',' << num(q.h_stats.mean) << ',' << num(q.r_stats.mean) << ','
      << r.n_marked << ',' << r.n_refined << ',' << r.n_extended << ',' << num(r.t_solve) << ','
      << num(r.t_estimate) << ',' << num(r.t_mark) << ',' << num(r.t_refine);
    return s.str();
}

void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<double>& eta2)
{
    const auto cells = mesh.active_cells();
    const auto quality = quality_report(mesh, 0);
    std::size_t conn = 0;
    for (int c : cells)
        conn += mesh.cell(c).vertices.size() + 1;
    out << "# vtk DataFile Version 3.0\nadaptive VEM mesh\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << mesh.vertex_count() << " double\n";
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const Point3& p = mesh.vertex(static_cast<int>(v)).position;
        out << num(p.x) << ' ' << num(p.y) << ' ' << num(p.z) << '\n';
    }
    out << "POLYGONS " << cells.size() << ' ' << conn << '\n';
    for (int c : cells) {
        const auto& vs = mesh.cell(c).vertices;
        out << vs.size();
        for (int v : vs)
            out << ' ' << v;
        out << '\n';
    }
    out << "CELL_DATA " << cells.size() << "\nSCALARS eta2 double 1\nLOOKUP_TABLE default\n";
    for (int c : cells)
        out << num(c < static_cast<int>(eta2.size()) ? eta2[c] : 0.0) << '\n';
    out << "SCALARS ar_Rr double 1\nLOOKUP_TABLE default\n";
    for (double a : quality.ar_rr)
        out << num(a) << '\n';
    out << "SCALARS fracture int 1\nLOOKUP_TABLE default\n";
    for (int c : cells)
        out << mesh.cell(c).fracture << '\n';
}

void write_svg(std::ostream& out, const Mesh& mesh, const std::vector<double>& eta2)
{
    const auto cells = mesh.active_cells();
    const int nf = mesh.fracture_count();
    std::vector<std::array<double, 4>> box(nf, {1e300, 1e300, -1e300, -1e300});
    double lo = 1e300, hi = -1e300;
    for (int c : cells) {
        auto& b = box[mesh.cell(c).fracture];
        for (const auto& p : mesh.cell(c).polygon.vertices) {
            b[0] = std::min(b[0], p.x), b[1] = std::min(b[1], p.y);
            b[2] = std::max(b[2], p.x), b[3] = std::max(b[3], p.y);
        }
        const double l = log_eta(eta2, c);
        if (!std::isnan(l))
            lo = std::min(lo, l), hi = std::max(hi, l);
    }
    if (lo > hi)
        lo = hi = 0.0;
    const double panel = 400.0, gap = 20.0, legend = 90.0;
    std::vector<double> scale(nf, 1.0), offset(nf, 0.0);
    double x = gap;
    for (int f = 0; f < nf; ++f) {
        const double w = box[f][2] - box[f][0], h = box[f][3] - box[f][1];
        scale[f] = (w > 0 && h > 0) ? panel / std::max(w, h) : 1.0;
        offset[f] = x;
        x += (w > 0 ? w * scale[f] : 0.0) + gap;
    }
    const double width = x + legend, height = panel + 2 * gap;
    const double stroke = 0.5;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int c : cells) {
        const int f = mesh.cell(c).fracture;
        out << "<polygon points=\"";
        for (const auto& p : mesh.cell(c).polygon.vertices) {
            const double px = offset[f] + (p.x - box[f][0]) * scale[f];
            const double py = gap + (box[f][3] - p.y) * scale[f];
            out << px << ',' << py << ' ';
        }
        const double l = log_eta(eta2, c);
        const double t = hi > lo ? (l - lo) / (hi - lo) : 0.5;
        out << "\" fill=\"" << color(t) << "\" stroke=\"black\" stroke-width=\"" << stroke << "\"/>\n";
    }
    // Legend: vertical ramp with end labels.
    const double lx = x + 10, ly = gap, lh = panel;
    out << "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
    for (int i = 0; i <= 8; ++i)
        out << "<stop offset=\"" << i / 8.0 << "\" stop-color=\"" << color(i / 8.0) << "\"/>\n";
    out << "</linearGradient></defs>\n";
    out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"20\" height=\"" << lh
        << "\" fill=\"url(#ramp)\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", hi);
    out << "<text x=\"" << lx + 24 << "\" y=\"" << ly + 10 << "\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.2f", lo);
    out << "<text x=\"" << lx + 24 << "\" y=\"" << ly + lh << "\" font-size=\"11\">" << buf << "</text>\n";
    out << "<text x=\"" << lx << "\" y=\"" << ly + lh + 14 << "\" font-size=\"11\">log10 eta^2</text>\n";
    out << "</svg>\n";
}

} // namespace vemref
