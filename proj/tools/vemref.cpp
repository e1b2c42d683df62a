#include "vemref/adapt.hpp"
#include "vemref/dfn.hpp"
#include "vemref/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

using namespace vemref;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string case_name = "lshape";
    int k = 1;
    double theta = 0.5;
    double c_rho = 1.5;
    double c_al = 1.0;
    long long max_dofs = -1; // per-case default
    std::string network;
    std::vector<int> snapshots;
    std::string output = "out";
    std::string solver = "direct";
};

void apply_config_file(RunConfig& rc, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    auto take = [&](const char* key, auto& field) {
        if (j.contains(key))
            j.at(key).get_to(field);
    };
    take("case", rc.case_name);
    take("k", rc.k);
    take("theta", rc.theta);
    take("c_rho", rc.c_rho);
    take("c_al", rc.c_al);
    take("max_dofs", rc.max_dofs);
    take("network", rc.network);
    take("snapshots", rc.snapshots);
    take("output", rc.output);
    take("solver", rc.solver);
}

void validate(const RunConfig& rc)
{
    if (rc.case_name != "lshape" && rc.case_name != "dfn" && rc.case_name != "custom")
        throw std::runtime_error("case must be lshape, dfn or custom");
    if (rc.k < 1 || rc.k > 3)
        throw std::runtime_error("k must be 1, 2 or 3");
    if (!(rc.theta > 0.0 && rc.theta <= 1.0))
        throw std::runtime_error("theta must lie in (0, 1]");
    if (!(rc.c_rho > 0.0))
        throw std::runtime_error("c-rho must be positive");
    if (!(rc.c_al >= 0.0))
        throw std::runtime_error("c-al must be non-negative");
    if (rc.case_name == "custom" && rc.network.empty())
        throw std::runtime_error("case custom needs --network");
    if (rc.solver != "direct" && rc.solver != "cg")
        throw std::runtime_error("solver must be direct or cg");
}

std::string default_network()
{
    return std::string(VEMREF_DATA_DIR) + "/three_fracture.json";
}

int cmd_run(RunConfig rc, const std::string& config_path)
{
    if (!config_path.empty())
        apply_config_file(rc, config_path);
    if (const char* env = std::getenv("VEMREF_OUTPUT_DIR"); env && *env)
        rc.output = env;
    validate(rc);

    Mesh mesh;
    Problem problem;
    FractureNetwork net;
    if (rc.case_name == "lshape") {
        Benchmark b = lshape_benchmark();
        mesh = std::move(b.mesh);
        problem = std::move(b.problem);
    } else {
        net = load_network(rc.network.empty() ? default_network() : rc.network);
        mesh = build_minimal_dfn_mesh(net);
        if (const std::string bad = check_conformity(mesh, net); !bad.empty())
            throw std::runtime_error("minimal mesh is not conforming: " + bad);
        problem = manufactured_problem(net);
    }

    AdaptiveConfig cfg;
    cfg.k = rc.k;
    cfg.theta = rc.theta;
    cfg.params = {rc.c_rho, rc.c_al};
    cfg.solver = rc.solver == "cg" ? SolverKind::cg : SolverKind::direct;
    if (rc.max_dofs > 0)
        cfg.dof_budget = static_cast<std::size_t>(rc.max_dofs);
    else
        cfg.dof_budget = rc.case_name == "lshape" ? 10000 : 500000;

    fs::create_directories(rc.output);
    const fs::path dir(rc.output);
    std::ofstream csv(dir / "iterations.csv");
    csv << csv_header() << '\n';
    const std::set<int> wanted(rc.snapshots.begin(), rc.snapshots.end());
    auto snapshot = [&](const Mesh& m, const std::vector<double>& eta2, int step) {
        std::ofstream vtk(dir / ("mesh_" + std::to_string(step) + ".vtk"));
        write_vtk(vtk, m, eta2);
        std::ofstream svg(dir / ("mesh_" + std::to_string(step) + ".svg"));
        write_svg(svg, m, eta2);
    };
    std::vector<double> last_eta2;
    int last_m = -1;
    const auto recs = run_adaptive(mesh, problem, cfg, [&](const IterationState& s) {
        csv << csv_row(s.record) << '\n' << std::flush;
        if (wanted.count(s.record.m))
            snapshot(s.mesh, s.estimate.eta2, s.record.m);
        if (wanted.count(-1)) {
            last_eta2 = s.estimate.eta2;
            last_m = s.record.m;
        }
        std::cerr << "m=" << s.record.m << " dofs=" << s.record.dofs << " eta_rel=" << s.record.eta_rel << '\n';
    });
    if (wanted.count(-1) && last_m >= 0 && !wanted.count(last_m))
        snapshot(mesh, last_eta2, last_m);

    const auto& last = recs.back();
    auto finite = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    json summary = {
        {"case", rc.case_name},
        {"k", rc.k},
        {"theta", rc.theta},
        {"c_rho", rc.c_rho},
        {"c_al", rc.c_al},
        {"dof_budget", cfg.dof_budget},
        {"iterations", recs.size()},
        {"final_dofs", last.dofs},
        {"final_cells", last.cells},
        {"final_eta_rel", last.eta_rel},
        {"final_energy_err", finite(last.error_rel)},
        {"final_effectivity", finite(last.effectivity)},
        {"rate_eta", finite(final_rate(recs, cfg.window))},
        {"rate_error", finite(final_rate(recs, cfg.window, true))},
        {"R_tri", last.quality.r_tri},
        {"R_tri_al", last.quality.r_tri_al},
        {"Ef_inv", last.quality.ef_inv},
        {"ar_Rr_median", last.quality.ar_rr_stats.median},
    };
    if (!net.fractures.empty()) {
        summary["network"] = rc.network.empty() ? default_network() : rc.network;
        summary["fractures"] = net.fractures.size();
        summary["traces"] = net.traces.size();
    }
    double t[4] = {0, 0, 0, 0};
    for (const auto& r : recs) {
        t[0] += r.t_solve, t[1] += r.t_estimate, t[2] += r.t_mark, t[3] += r.t_refine;
    }
    summary["time"] = {{"solve", t[0]}, {"estimate", t[1]}, {"mark", t[2]}, {"refine", t[3]}};
    std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
    std::cout << recs.size() << " iterations, " << last.dofs << " DOFs, eta_rel " << last.eta_rel << ", rate "
              << final_rate(recs, cfg.window) << "; output in " << rc.output << '\n';
    return 0;
}

int cmd_validate(const std::string& path)
{
    const FractureNetwork net = load_network(path);
    const Mesh mesh = build_minimal_dfn_mesh(net);
    const std::string bad = check_conformity(mesh, net);
    auto count = [](std::size_t n, const char* what) {
        return std::to_string(n) + " " + what + (n == 1 ? "" : "s");
    };
    std::cout << count(net.fractures.size(), "fracture") << ", " << count(net.traces.size(), "trace") << ", "
              << count(mesh.active_cell_count(), "cell") << '\n';
    if (!bad.empty()) {
        std::cerr << "conformity check failed: " << bad << '\n';
        return 1;
    }
    std::cout << "minimal mesh is conforming on every trace\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adaptive virtual element solver with quality-controlled polygonal refinement"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string config_path;
    auto* run = app.add_subcommand("run", "run an adaptive benchmark");
    run->add_option("--case", rc.case_name, "lshape, dfn or custom")->check(CLI::IsMember({"lshape", "dfn", "custom"}));
    run->add_option("--k", rc.k, "polynomial order (1-3)");
    run->add_option("--theta", rc.theta, "Dorfler parameter");
    run->add_option("--c-rho", rc.c_rho, "eigenvalue-ratio threshold for the cut direction");
    run->add_option("--c-al", rc.c_al, "aligned-edge threshold");
    run->add_option("--max-dofs", rc.max_dofs, "DOF budget (default 1e4 for lshape, 5e5 otherwise)");
    run->add_option("--network", rc.network, "fracture network JSON");
    run->add_option("--snapshots", rc.snapshots, "steps to export as VTK/SVG (-1 = final)");
    run->add_option("--output", rc.output, "output directory (VEMREF_OUTPUT_DIR overrides)");
    run->add_option("--solver", rc.solver, "direct or cg");
    run->add_option("--config", config_path, "JSON file whose keys override the flags");

    std::string network_path;
    auto* val = app.add_subcommand("validate", "check a fracture network file");
    val->add_option("network", network_path, "fracture network JSON")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run)
            return cmd_run(rc, config_path);
        return cmd_validate(network_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
