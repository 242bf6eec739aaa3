// Command-line front end: problem ingestion, solvers, property suites and
// deterministic artifact emission.
//
// Exit codes: 0 success, 1 input error, 2 validation failure, 3 numerical
// precondition (stability bound) failure.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "hrc/hrc.hpp"

namespace fs = std::filesystem;
using hrc::json;

namespace {

struct CommonOpts {
    std::string problem_file;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_problem = true) {
    if (needs_problem)
        cmd->add_option("problem", o.problem_file, "problem file (JSON)")->required();
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--threads", o.threads, "worker threads (0: HRC_THREADS or hardware)");
}

void ensure_out_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

int quick_validate_gate(const hrc::ProblemSpec& spec, bool gate) {
    hrc::AssumptionReport rep = hrc::validate_assumptions(spec, 2000, 1);
    if (!rep.all_pass()) {
        for (const auto& c : rep.checks)
            if (!c.pass)
                std::cerr << "validation failure: " << c.id << " (estimate " << c.estimate
                          << (c.witness.empty() ? "" : ", witness " + c.witness) << ")\n";
        if (gate) return 2;
        std::cerr << "warning: proceeding despite validation failures\n";
    }
    return 0;
}

std::vector<int> grid_axes(const hrc::ProblemSpec& spec, int nodes) {
    return std::vector<int>(static_cast<std::size_t>(spec.dim), nodes);
}

int run_validate(const CommonOpts& o, int samples) {
    hrc::ProblemSpec spec = hrc::load_problem(o.problem_file);
    hrc::AssumptionReport rep = hrc::validate_assumptions(spec, samples, o.seed);
    for (const auto& c : rep.checks) {
        std::cout << (c.pass ? "[pass]" : "[FAIL]") << (c.flagged ? "[flagged]" : "") << " "
                  << c.id << ": " << c.detail << " (estimate " << c.estimate << ")";
        if (!c.witness.empty()) std::cout << " witness: " << c.witness;
        std::cout << "\n";
    }
    ensure_out_dir(o.out_dir);
    hrc::Manifest manifest("validate", spec.resolved_config,
                           json{{"seed", o.seed}, {"samples", samples}});
    std::string report = rep.to_json().dump(2) + "\n";
    hrc::write_text_file(out_path(o.out_dir, "assumptions.json"), report);
    manifest.add_output("assumptions.json", report);
    manifest.write(out_path(o.out_dir, "manifest.json"));
    std::cout << (rep.all_pass() ? "validation passed" : "validation FAILED") << "\n";
    return rep.all_pass() ? 0 : 2;
}

int run_solve(const CommonOpts& o, int grid_nodes, double grid_dt) {
    hrc::ProblemSpec spec = hrc::load_problem(o.problem_file);
    if (int rc = quick_validate_gate(spec, true)) return rc;
    hrc::LatticeGrid grid = hrc::LatticeGrid::build(spec, grid_axes(spec, grid_nodes), grid_dt);
    hrc::HierarchicalSolution sol = hrc::backward_sweep_hierarchical(spec, grid, o.threads);

    ensure_out_dir(o.out_dir);
    hrc::Manifest manifest("solve", spec.resolved_config,
                           json{{"seed", o.seed},
                                {"threads", o.threads},
                                {"grid_nodes", grid_nodes},
                                {"dt", grid.dt},
                                {"time_steps", grid.n_t}});
    std::string csv = hrc::solution_csv(sol, spec);
    hrc::write_text_file(out_path(o.out_dir, "solution.csv"), csv);
    manifest.add_output("solution.csv", csv);
    std::string report = sol.report.to_json().dump(2) + "\n";
    hrc::write_text_file(out_path(o.out_dir, "sweep_report.json"), report);
    manifest.add_output("sweep_report.json", report);
    manifest.write(out_path(o.out_dir, "manifest.json"));

    int node0 = grid.nearest_node(spec.initial_state);
    std::cout << "solved " << grid.n_t << " steps x " << grid.node_count()
              << " nodes (dt = " << grid.dt << ", bound " << grid.cfl_bound << ")\n"
              << "phi1(0, x0) = " << sol.leader_value.at(0, node0)
              << ", phi2(0, x0) = " << sol.follower_value.at(0, node0) << "\n";
    return 0;
}

hrc::Vec parse_control_point(const std::string& text, int dim, const char* what) {
    hrc::Vec u(dim);
    std::stringstream ss(text);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= dim) throw std::runtime_error(std::string(what) + ": too many coordinates");
        u[i++] = std::stod(item);
    }
    if (i != dim) throw std::runtime_error(std::string(what) + ": expected " +
                                           std::to_string(dim) + " coordinates");
    return u;
}

int run_simulate(const CommonOpts& o, int n_paths, double dt, bool dump_paths,
                 const std::string& leader_ctrl, const std::string& follower_ctrl) {
    hrc::ProblemSpec spec = hrc::load_problem(o.problem_file);
    quick_validate_gate(spec, false);  // degenerate dynamics allowed here, with a warning

    hrc::Vec v0 = leader_ctrl.empty() ? spec.leader_controls.point(0)
                                      : parse_control_point(leader_ctrl, spec.leader_dim(),
                                                            "--leader-control");
    hrc::Vec w0 = follower_ctrl.empty() ? spec.follower_controls.point(0)
                                        : parse_control_point(follower_ctrl, spec.follower_dim(),
                                                              "--follower-control");
    hrc::PathBundle b = hrc::simulate(spec, hrc::FeedbackPolicy::constant(v0),
                                      hrc::FeedbackPolicy::constant(w0), n_paths, dt, o.seed,
                                      o.threads);

    // Terminal-state summary per coordinate.
    json summary;
    summary["n_paths"] = b.n_paths;
    summary["n_steps"] = b.n_steps;
    summary["dt"] = b.dt;
    summary["seed"] = o.seed;
    json coords = json::array();
    for (int i = 0; i < b.dim; ++i) {
        double s = 0.0, s2 = 0.0;
        for (int p = 0; p < b.n_paths; ++p) {
            double x = b.state_ptr(p, b.n_steps)[i];
            s += x;
            s2 += x * x;
        }
        double mean = s / b.n_paths;
        double var = std::max(0.0, s2 / b.n_paths - mean * mean);
        coords.push_back({{"axis", i}, {"terminal_mean", mean}, {"terminal_variance", var}});
    }
    summary["terminal"] = coords;

    ensure_out_dir(o.out_dir);
    hrc::Manifest manifest("simulate", spec.resolved_config,
                           json{{"seed", o.seed},
                                {"threads", o.threads},
                                {"paths", n_paths},
                                {"dt", dt},
                                {"dump_paths", dump_paths}});
    std::string sj = summary.dump(2) + "\n";
    hrc::write_text_file(out_path(o.out_dir, "sim_summary.json"), sj);
    manifest.add_output("sim_summary.json", sj);
    if (dump_paths) {
        std::string csv = hrc::paths_csv(b);
        hrc::write_text_file(out_path(o.out_dir, "paths.csv"), csv);
        manifest.add_output("paths.csv", csv);
    }
    manifest.write(out_path(o.out_dir, "manifest.json"));
    std::cout << "simulated " << b.n_paths << " paths x " << b.n_steps << " steps\n";
    return 0;
}

int run_riskcheck(const CommonOpts& o, int trials, int n_paths, double dt, bool has_problem) {
    std::vector<hrc::Generator> gens;
    json resolved;
    if (has_problem) {
        hrc::ProblemSpec spec = hrc::load_problem(o.problem_file);
        gens = {spec.leader_generator, spec.follower_generator};
        resolved = spec.resolved_config;
    } else {
        gens = {hrc::Generator::zero(), hrc::Generator::scaled_l1(0.5)};
        resolved = json{{"builtin_fixture", "noise-only, d=1, T=1"}};
    }
    hrc::RiskCheckReport rep =
        hrc::run_risk_axiom_suite(gens, trials, o.seed, n_paths, dt, {}, o.threads);
    for (const auto& out : rep.outcomes) {
        std::cout << (out.pass() ? "[pass]" : "[FAIL]") << " " << out.axiom << " [" << out.generator
                  << "] trials=" << out.trials << " failures=" << out.failures
                  << " margin=" << out.margin;
        if (!out.witness.empty()) std::cout << " | " << out.witness;
        std::cout << "\n";
    }
    ensure_out_dir(o.out_dir);
    hrc::Manifest manifest("riskcheck", resolved,
                           json{{"seed", o.seed},
                                {"threads", o.threads},
                                {"trials", trials},
                                {"paths", n_paths},
                                {"dt", dt}});
    std::string rj = rep.to_json().dump(2) + "\n";
    hrc::write_text_file(out_path(o.out_dir, "riskcheck.json"), rj);
    manifest.add_output("riskcheck.json", rj);
    manifest.write(out_path(o.out_dir, "manifest.json"));
    std::cout << (rep.suite_pass() ? "risk-axiom suite passed" : "risk-axiom suite FAILED") << "\n";
    return rep.suite_pass() ? 0 : 2;
}

int run_dpp(const CommonOpts& o, int grid_nodes, double grid_dt, int r_steps, int substeps) {
    hrc::ProblemSpec spec = hrc::load_problem(o.problem_file);
    if (int rc = quick_validate_gate(spec, true)) return rc;
    hrc::LatticeGrid grid = hrc::LatticeGrid::build(spec, grid_axes(spec, grid_nodes), grid_dt);
    hrc::HierarchicalSolution sol = hrc::backward_sweep_hierarchical(spec, grid, o.threads);
    int r = r_steps > 0 ? r_steps : std::max(1, grid.n_t / 2);
    double res1 = hrc::dpp_residual(spec, sol, hrc::Player::Leader, r, substeps, o.threads);
    double res2 = hrc::dpp_residual(spec, sol, hrc::Player::Follower, r, substeps, o.threads);

    json out{{"r_steps", r},
             {"substeps", substeps},
             {"dt", grid.dt},
             {"leader_residual", res1},
             {"follower_residual", res2}};
    ensure_out_dir(o.out_dir);
    hrc::Manifest manifest("dpp", spec.resolved_config,
                           json{{"threads", o.threads},
                                {"grid_nodes", grid_nodes},
                                {"dt", grid.dt},
                                {"r_steps", r},
                                {"substeps", substeps}});
    std::string rj = out.dump(2) + "\n";
    hrc::write_text_file(out_path(o.out_dir, "dpp.json"), rj);
    manifest.add_output("dpp.json", rj);
    manifest.write(out_path(o.out_dir, "manifest.json"));
    std::cout << "recursion residuals at r = " << r << ", substeps = " << substeps
              << ": leader " << res1 << ", follower " << res2 << "\n";
    return 0;
}

int run_crossval(const CommonOpts& o, int grid_nodes, double grid_dt, int n_paths, double mc_dt,
                 bool dump_bsde) {
    hrc::ProblemSpec spec = hrc::load_problem(o.problem_file);
    if (int rc = quick_validate_gate(spec, true)) return rc;
    hrc::LatticeGrid grid = hrc::LatticeGrid::build(spec, grid_axes(spec, grid_nodes), grid_dt);
    hrc::HierarchicalSolution sol = hrc::backward_sweep_hierarchical(spec, grid, o.threads);
    hrc::RegressionBasis basis;
    hrc::CrossValReport rep =
        hrc::cross_validate(spec, sol, n_paths, mc_dt, o.seed, basis, o.threads);

    ensure_out_dir(o.out_dir);
    hrc::Manifest manifest("crossval", spec.resolved_config,
                           json{{"seed", o.seed},
                                {"threads", o.threads},
                                {"grid_nodes", grid_nodes},
                                {"grid_dt", grid.dt},
                                {"paths", n_paths},
                                {"dt", mc_dt}});
    std::string rj = rep.to_json().dump(2) + "\n";
    hrc::write_text_file(out_path(o.out_dir, "crossval.json"), rj);
    manifest.add_output("crossval.json", rj);

    if (dump_bsde) {
        auto table = hrc::make_tabulated_policy(spec, sol);
        hrc::PathBundle b = hrc::simulate(spec,
                                          hrc::FeedbackPolicy::tabulated(table, hrc::Player::Leader),
                                          hrc::FeedbackPolicy::tabulated(table, hrc::Player::Follower),
                                          n_paths, mc_dt, o.seed, o.threads);
        for (hrc::Player pl : {hrc::Player::Leader, hrc::Player::Follower}) {
            std::vector<double> xi = hrc::accumulate_cost(b, spec, pl);
            hrc::BsdeSolution bs = hrc::solve_bsde(b, spec.generator(pl), xi, basis, o.threads);
            std::string name = std::string("bsde_") + hrc::player_name(pl) + ".csv";
            std::string csv = hrc::bsde_csv(b, bs);
            hrc::write_text_file(out_path(o.out_dir, name), csv);
            manifest.add_output(name, csv);
            std::string diag = hrc::bsde_diagnostics_json(bs).dump(2) + "\n";
            std::string dname = std::string("bsde_") + hrc::player_name(pl) + "_diag.json";
            hrc::write_text_file(out_path(o.out_dir, dname), diag);
            manifest.add_output(dname, diag);
        }
    }
    manifest.write(out_path(o.out_dir, "manifest.json"));
    std::cout << "leader: grid " << rep.grid_value_leader << " vs mc " << rep.mc_value_leader
              << " (gap " << rep.gap_leader << ")\n"
              << "follower: grid " << rep.grid_value_follower << " vs mc "
              << rep.mc_value_follower << " (gap " << rep.gap_follower << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical risk-averse control toolkit"};
    app.require_subcommand(1);

    CommonOpts vo;
    int v_samples = 5000;
    auto* c_validate = app.add_subcommand("validate", "check standing assumptions");
    add_common(c_validate, vo);
    c_validate->add_option("--samples", v_samples, "sample count");

    CommonOpts so;
    int s_nodes = 101;
    double s_dt = 0.0;
    auto* c_solve = app.add_subcommand("solve", "run the coupled backward sweep");
    add_common(c_solve, so);
    c_solve->add_option("--grid-nodes", s_nodes, "nodes per axis");
    c_solve->add_option("--dt", s_dt, "time step (0: auto from stability bound)");

    CommonOpts mo;
    int m_paths = 10000;
    double m_dt = 1.0 / 256.0;
    bool m_dump = false;
    std::string m_leader, m_follower;
    auto* c_sim = app.add_subcommand("simulate", "simulate under constant controls");
    add_common(c_sim, mo);
    c_sim->add_option("--paths", m_paths, "path count");
    c_sim->add_option("--dt", m_dt, "time step");
    c_sim->add_flag("--dump-paths", m_dump, "write the full path table");
    c_sim->add_option("--leader-control", m_leader, "comma-separated control point");
    c_sim->add_option("--follower-control", m_follower, "comma-separated control point");

    CommonOpts ro;
    int r_trials = 20, r_paths = 2048;
    double r_dt = 1.0 / 32.0;
    auto* c_risk = app.add_subcommand("riskcheck", "run the risk-axiom property suite");
    c_risk->add_option("problem", ro.problem_file, "problem file (optional; built-in fixture otherwise)");
    c_risk->add_option("--out-dir", ro.out_dir, "output directory");
    c_risk->add_option("--seed", ro.seed, "random seed");
    c_risk->add_option("--threads", ro.threads, "worker threads");
    c_risk->add_option("--trials", r_trials, "seeded trials");
    c_risk->add_option("--paths", r_paths, "paths per trial");
    c_risk->add_option("--dt", r_dt, "time step per trial");

    CommonOpts po;
    int d_nodes = 101, d_r = 0, d_sub = 1;
    double d_dt = 0.0;
    auto* c_dpp = app.add_subcommand("dpp", "recursion self-consistency residuals");
    add_common(c_dpp, po);
    c_dpp->add_option("--grid-nodes", d_nodes, "nodes per axis");
    c_dpp->add_option("--dt", d_dt, "time step (0: auto)");
    c_dpp->add_option("--r-steps", d_r, "inner horizon in steps (0: half)");
    c_dpp->add_option("--substeps", d_sub, "inner re-discretization factor");

    CommonOpts xo;
    int x_nodes = 101, x_paths = 20000;
    double x_grid_dt = 0.0, x_dt = 1.0 / 256.0;
    bool x_dump = false;
    auto* c_xval = app.add_subcommand("crossval", "grid vs Monte-Carlo cross-validation");
    add_common(c_xval, xo);
    c_xval->add_option("--grid-nodes", x_nodes, "nodes per axis");
    c_xval->add_option("--grid-dt", x_grid_dt, "grid time step (0: auto)");
    c_xval->add_option("--paths", x_paths, "Monte-Carlo path count");
    c_xval->add_option("--dt", x_dt, "Monte-Carlo time step");
    c_xval->add_flag("--dump-bsde", x_dump, "dump per-path backward solutions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_validate->parsed()) return run_validate(vo, v_samples);
        if (c_solve->parsed()) return run_solve(so, s_nodes, s_dt);
        if (c_sim->parsed()) return run_simulate(mo, m_paths, m_dt, m_dump, m_leader, m_follower);
        if (c_risk->parsed())
            return run_riskcheck(ro, r_trials, r_paths, r_dt, !ro.problem_file.empty());
        if (c_dpp->parsed()) return run_dpp(po, d_nodes, d_dt, d_r, d_sub);
        if (c_xval->parsed()) return run_crossval(xo, x_nodes, x_grid_dt, x_paths, x_dt, x_dump);
    } catch (const hrc::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const hrc::CflError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
