#include "vemref/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

namespace vemref {

std::vector<int> doerfler_mark(const std::vector<double>& eta2, const std::vector<int>& cells, double theta)
{
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("theta must lie in [0, 1]");
    std::vector<int> order(cells);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return eta2[a] != eta2[b] ? eta2[a] > eta2[b] : a < b;
    });
    // Summing in sorted order keeps the result independent of the input permutation.
    double total = 0.0;
    for (int c : order)
        total += eta2[c];
    std::vector<int> marked;
    if (total <= 0.0 || theta == 0.0)
        return marked;
    const double target = theta * total;
    double acc = 0.0;
    for (int c : order) {
        if (eta2[c] <= 0.0)
            break;
        marked.push_back(c);
        acc += eta2[c];
        if (acc >= target)
            break;
    }
    return marked;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2 || den <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / den;
}

namespace {

double window_slope(const std::vector<IterationRecord>& recs, std::size_t first, std::size_t last, bool error)
{
    std::vector<double> x, y;
    for (std::size_t i = first; i < last; ++i) {
        x.push_back(static_cast<double>(recs[i].dofs));
        y.push_back(error ? recs[i].error_rel : recs[i].eta_rel);
    }
    return loglog_slope(x, y);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

double final_rate(const std::vector<IterationRecord>& recs, int window, bool error)
{
    if (window < 2 || recs.size() < static_cast<std::size_t>(window))
        return std::numeric_limits<double>::quiet_NaN();
    return window_slope(recs, recs.size() - static_cast<std::size_t>(window), recs.size(), error);
}

std::vector<IterationRecord> run_adaptive(Mesh& mesh, const Problem& problem, const AdaptiveConfig& config,
                                          const IterationObserver& observer)
{
    if (config.theta < 0.0 || config.theta > 1.0)
        throw std::invalid_argument("theta must lie in [0, 1]");
    if (config.window < 2)
        throw std::invalid_argument("rate window must be at least 2");
    using clock = std::chrono::steady_clock;
    std::vector<IterationRecord> recs;
    for (int m = 0; m < config.max_iterations; ++m) {
        IterationRecord rec;
        rec.m = m;

        auto t0 = clock::now();
        const Solution sol = assemble_and_solve(mesh, config.k, problem, config.solver);
        rec.t_solve = seconds_since(t0);

        t0 = clock::now();
        const EstimatorReport est = global_estimator(mesh, sol, problem);
        rec.t_estimate = seconds_since(t0);

        rec.dofs = static_cast<std::size_t>(sol.layout.ndofs);
        rec.cells = mesh.active_cell_count();
        rec.eta_omega = std::sqrt(est.eta_omega2);
        rec.eta_rel = est.eta_rel;
        if (est.error_rel >= 0.0) {
            rec.error_rel = est.error_rel;
            rec.effectivity = est.effectivity;
        }
        rec.quality = quality_report(mesh, rec.dofs);
        rec.quality.ar_rr.clear();
        rec.quality.ar_rh.clear();
        const auto W = static_cast<std::size_t>(config.window);
        if (recs.size() >= W) {
            rec.alpha = window_slope(recs, recs.size() - W, recs.size(), false);
            if (est.error_rel >= 0.0)
                rec.alpha_error = window_slope(recs, recs.size() - W, recs.size(), true);
        }

        bool stop = rec.dofs >= config.dof_budget || rec.eta_rel <= config.converged_eta_rel;
        if (!stop) {
            t0 = clock::now();
            const std::vector<int> marked = doerfler_mark(est.eta2, mesh.active_cells(), config.theta);
            rec.t_mark = seconds_since(t0);
            rec.n_marked = marked.size();
            if (marked.empty()) {
                stop = true;
            } else {
                t0 = clock::now();
                const RefineOutcome out = refine(mesh, marked, config.params);
                rec.t_refine = seconds_since(t0);
                rec.n_refined = out.refined.size();
                rec.n_extended = out.extended.size();
                rec.truncated = out.truncated;
                stop = out.refined.empty();
            }
        }
        recs.push_back(rec);
        if (observer)
            observer({mesh, sol, est, recs.back()});
        if (stop)
            break;
    }
    return recs;
}

namespace {

double lshape_angle(const Point2& p)
{
    double beta = std::atan2(p.y, p.x);
    if (beta < -0.5 * std::numbers::pi - 1e-12)
        beta += 2.0 * std::numbers::pi;
    return beta;
}

} // namespace

Benchmark lshape_benchmark()
{
    const Polygon l{{{0, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, 0}, {0, 0}}};
    Benchmark b{build_mesh(convex_decomposition(l)), {}};
    auto u = [](const Point2& p) {
        const double r = std::hypot(p.x, p.y);
        return std::pow(r, 2.0 / 3.0) * std::sin(2.0 / 3.0 * (lshape_angle(p) + 0.5 * std::numbers::pi));
    };
    auto grad = [](const Point2& p) {
        const double r = std::hypot(p.x, p.y);
        if (r == 0.0)
            return Vec2{};
        const double beta = lshape_angle(p);
        const double phi = 2.0 / 3.0 * (beta + 0.5 * std::numbers::pi);
        const double c = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0);
        const double gr = c * std::sin(phi), gb = c * std::cos(phi);
        return Vec2{gr * std::cos(beta) - gb * std::sin(beta), gr * std::sin(beta) + gb * std::cos(beta)};
    };
    b.problem.fractures.push_back({1.0, {}, u});
    b.problem.exact.push_back({u, grad});
    return b;
}

} // namespace vemref
