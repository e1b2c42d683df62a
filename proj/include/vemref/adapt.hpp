#pragma once

#include "vemref/estimator.hpp"
#include "vemref/refine.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace vemref {

struct AdaptiveConfig {
    double theta = 0.5;
    int k = 1;
    RefinementParams params;
    std::size_t dof_budget = 10000;
    int window = 5;
    SolverKind solver = SolverKind::direct;
    int max_iterations = 1000;
    double converged_eta_rel = 1e-10; // below this the estimate is rounding noise
};

struct IterationRecord {
    int m = 0;
    std::size_t dofs = 0;
    std::size_t cells = 0;
    double eta_omega = 0.0;
    double eta_rel = 0.0;
    double error_rel = std::numeric_limits<double>::quiet_NaN();
    double effectivity = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();       // slope of eta_rel over records m-W .. m-1
    double alpha_error = std::numeric_limits<double>::quiet_NaN(); // same for error_rel
    MeshQualityReport quality; // per-cell vectors cleared
    std::size_t n_marked = 0, n_refined = 0, n_extended = 0;
    bool truncated = false;
    double t_solve = 0.0, t_estimate = 0.0, t_mark = 0.0, t_refine = 0.0; // seconds
};

/// Smallest prefix of the cells sorted by eta2 descending (ties by id) whose
/// sum reaches theta * sum(eta2). Empty when every value is zero.
std::vector<int> doerfler_mark(const std::vector<double>& eta2, const std::vector<int>& cells, double theta);

/// Least-squares slope of log(y) against log(x); NaN with fewer than two usable points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct IterationState {
    const Mesh& mesh;
    const Solution& solution;
    const EstimatorReport& estimate;
    const IterationRecord& record;
};

using IterationObserver = std::function<void(const IterationState&)>;

/// SOLVE -> ESTIMATE -> MARK -> REFINE until the DOF budget is reached, the
/// marked set is empty or a refine call makes no progress. `mesh` is refined in place.
std::vector<IterationRecord> run_adaptive(Mesh& mesh, const Problem& problem, const AdaptiveConfig& config,
                                          const IterationObserver& observer = {});

/// Final-window rates: slopes over the last `window` records.
double final_rate(const std::vector<IterationRecord>& recs, int window, bool error = false);

struct Benchmark {
    Mesh mesh;
    Problem problem;
};

/// L-shaped domain (-1,1)^2 minus [-1,0]^2 with the harmonic corner
/// singularity r^(2/3) sin(2/3 (beta + pi/2)) as Dirichlet data.
Benchmark lshape_benchmark();

} // namespace vemref
