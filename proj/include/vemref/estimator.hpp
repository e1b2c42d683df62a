#pragma once

#include "vemref/vem.hpp"

#include <vector>

namespace vemref {

struct CellEstimate {
    double residual = 0.0;    // (D^2/K) ||Pi0 Q + K lap u||^2
    double jump = 0.0;        // sum of weighted flux jumps over non-Dirichlet edges
    double oscillation = 0.0; // (D^2/K) ||Q - Pi0 Q||^2

    double total() const { return residual + jump + oscillation; }
};

struct EstimatorReport {
    std::vector<CellEstimate> cells; // indexed by cell id; zero for inactive ids
    std::vector<double> eta2;        // per cell id, total()
    double eta_omega2 = 0.0;         // global form, each edge counted once with |e|/K_e
    double sum_local = 0.0;          // sum of eta2
    double energy_norm = 0.0;        // broken energy norm of Pi-nabla u
    double eta_rel = 0.0;
    double error_rel = -1.0;    // |||e|||, negative when no exact solution
    double effectivity = -1.0;  // |||e||| / eta_rel
};

/// Squared flux jump integral || sum_{E in N_e} K_E grad u_E . n_e^E ||^2_e.
double edge_jump_squared(const Mesh& mesh, const Solution& sol, const Problem& problem, int edge);

CellEstimate local_estimator(const Mesh& mesh, const Solution& sol, const Problem& problem, int cell);

EstimatorReport global_estimator(const Mesh& mesh, const Solution& sol, const Problem& problem);

} // namespace vemref
