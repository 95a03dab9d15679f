// Batch front-end: measure, solve, envelope, verify, certify, ns-run.
// Exit codes: 0 success / verdict holds, 1 verdict violation or
// nonconvergence (report written), 2 malformed input.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maflow/errors.hpp"
#include "maflow/fluids.hpp"
#include "maflow/io.hpp"
#include "maflow/solver.hpp"
#include "maflow/suites.hpp"

namespace fs = std::filesystem;
using namespace maflow;

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const fs::path& out_dir, const std::string& command, const KV& params) {
    KV kv;
    kv.emplace_back("command", command);
    kv.insert(kv.end(), params.begin(), params.end());
    write_report((out_dir / "manifest.txt").string(), kv);
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

KV report_of(const SolverReport& r) {
    return {{"iterations", std::to_string(r.iterations)},
            {"max_residual", format_double(r.max_residual)},
            {"converged", r.converged ? "true" : "false"}};
}

int cmd_measure(const std::string& nodes_path, const std::string& out) {
    const fs::path dir = prepare_out(out);
    write_manifest(dir, "measure", {{"nodes", nodes_path}});
    PLFunction f = read_node_csv(nodes_path);
    AtomicMeasure mu = ma_measure(f);
    write_measure_csv((dir / "measure.csv").string(), f.nodes, mu);
    return 0;
}

int cmd_solve(const std::string& problem_path, Scalar tol, int max_iters, const std::string& out) {
    const fs::path dir = prepare_out(out);
    write_manifest(dir, "solve",
                   {{"problem", problem_path},
                    {"tol", format_double(tol)},
                    {"max_iters", std::to_string(max_iters)}});
    DirichletProblem p = read_problem_csv(problem_path);
    try {
        auto [f, report] = solve_convex(p, tol, max_iters);
        write_node_csv((dir / "solution.csv").string(), f);
        write_report((dir / "report.txt").string(), report_of(report));
        return 0;
    } catch (const NotConvergedError& e) {
        write_node_csv((dir / "solution.csv").string(), e.partial);
        write_report((dir / "report.txt").string(), report_of(e.report));
        std::cerr << "solve: " << e.what() << "\n";
        return 1;
    }
}

int cmd_envelope(const std::string& field_path, Scalar tol, const std::string& out) {
    const fs::path dir = prepare_out(out);
    write_manifest(dir, "envelope", {{"field", field_path}, {"tol", format_double(tol)}});
    GridField g = read_grid_csv(field_path);
    try {
        EnvelopePair env = envelopes(g, tol, 20000);
        write_node_csv((dir / "envelope_convex.csv").string(), env.lower);
        write_node_csv((dir / "envelope_concave.csv").string(), env.upper);
        KV kv = report_of(env.lower_report);
        KV up = report_of(env.upper_report);
        KV merged;
        for (auto& [k, v] : kv) merged.emplace_back("convex_" + k, v);
        for (auto& [k, v] : up) merged.emplace_back("concave_" + k, v);
        write_report((dir / "report.txt").string(), merged);
        return 0;
    } catch (const NotConvergedError& e) {
        write_report((dir / "report.txt").string(), report_of(e.report));
        std::cerr << "envelope: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(const std::string& suite, int instances, std::uint64_t seed,
               const std::string& out) {
    const fs::path dir = prepare_out(out);
    write_manifest(dir, "verify",
                   {{"suite", suite},
                    {"instances", std::to_string(instances)},
                    {"seed", std::to_string(seed)}});
    SuiteResult result;
    if (suite == "comparison")
        result = run_comparison_suite(instances, seed);
    else if (suite == "strong")
        result = run_strong_suite(instances, seed);
    else if (suite == "generalised")
        result = run_generalised_suite(instances, seed);
    else
        throw std::invalid_argument("verify: unknown suite '" + suite + "'");

    write_verdict_csv((dir / "verdicts.csv").string(), result);
    write_report((dir / "report.txt").string(),
                 {{"suite", result.suite},
                  {"seed", std::to_string(result.seed)},
                  {"instances", std::to_string(static_cast<int>(result.cases.size()))},
                  {"violations", std::to_string(result.violations())},
                  {"generation_retries", std::to_string(result.generation_retries)}});
    if (!result.all_hold()) {
        std::cerr << "verify: " << result.violations() << " violation(s); see "
                  << (dir / "verdicts.csv") << "\n";
        return 1;
    }
    return 0;
}

int cmd_certify(const std::string& rhs_path, Scalar boundary_constant, const std::string& out) {
    const fs::path dir = prepare_out(out);
    write_manifest(dir, "certify",
                   {{"rhs", rhs_path}, {"boundary_constant", format_double(boundary_constant)}});
    GridField rhs = read_grid_csv(rhs_path);
    CertificateReport rep = nonexistence_certificate(rhs, boundary_constant, 1e-13);
    write_report((dir / "certificate.txt").string(),
                 {{"certified", rep.certified ? "true" : "false"},
                  {"max_deviation_convex", format_double(rep.max_deviation_lower)},
                  {"max_deviation_concave", format_double(rep.max_deviation_upper)},
                  {"contradiction_mass", format_double(rep.contradiction_mass)},
                  {"convex_iterations", std::to_string(rep.lower_report.iterations)},
                  {"concave_iterations", std::to_string(rep.upper_report.iterations)}});
    return rep.certified ? 0 : 1;
}

FluidConfig config_from_file(const std::string& path) {
    auto kv = read_key_value(path);
    auto need = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError(path, 0, key, "missing key");
        return it->second;
    };
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    FluidConfig cfg;
    try {
        cfg.nx = std::stoi(need("nx"));
        cfg.ny = std::stoi(need("ny"));
        cfg.lx = std::stod(need("lx"));
        cfg.ly = std::stod(need("ly"));
        cfg.dt = std::stod(need("dt"));
        cfg.ic.mode_n = std::stoi(get("ic_mode_n", "1"));
        cfg.ic.amplitude = std::stod(get("ic_amplitude", "1"));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(path, 0, "-", std::string("bad numeric value: ") + e.what());
    }
    const std::string boundary = need("boundary");
    if (boundary == "no_slip_box")
        cfg.boundary = BoundaryKind::NoSlipBox;
    else if (boundary == "channel_periodic_x")
        cfg.boundary = BoundaryKind::ChannelPeriodicX;
    else
        throw ParseError(path, 0, "boundary", "expected no_slip_box or channel_periodic_x");
    const std::string ic = get("ic", "rest");
    if (ic == "rest")
        cfg.ic.kind = InitialCondition::Kind::Rest;
    else if (ic == "shear")
        cfg.ic.kind = InitialCondition::Kind::Shear;
    else if (ic == "taylor_green")
        cfg.ic.kind = InitialCondition::Kind::TaylorGreen;
    else
        throw ParseError(path, 0, "ic", "expected rest, shear or taylor_green");
    return cfg;
}

int cmd_ns_run(const std::string& config_path, int steps, int diag_every, const std::string& out) {
    const fs::path dir = prepare_out(out);
    write_manifest(dir, "ns-run",
                   {{"config", config_path},
                    {"steps", std::to_string(steps)},
                    {"diag_every", std::to_string(diag_every)}});
    FluidConfig cfg = config_from_file(config_path);
    cfg.validate();

    std::ofstream series((dir / "series.csv").string(), std::ios::binary);
    series << "t,energy,identity_residual_inf,min_abs_delta_p,frac_delta_p_positive\n";
    auto emit = [&](const FluidState& s) {
        PressureDiagnostics diag = ma_identity_residual(s, cfg);
        const auto [where, min_abs] = find_zero_of_laplacian(diag);
        series << format_double(s.t) << ',' << format_double(kinetic_energy(s, cfg)) << ','
               << format_double(diag.identity_residual_inf) << ',' << format_double(min_abs) << ','
               << format_double(diag.sign_summary.fraction_positive) << '\n';
        return diag;
    };

    FluidState state = initial_state(cfg);
    emit(state);
    for (int k = 1; k <= steps; ++k) {
        state = step(state, cfg);
        if (k % diag_every == 0 || k == steps) emit(state);
    }

    PressureDiagnostics diag = ma_identity_residual(state, cfg);
    write_grid_csv((dir / "stream.csv").string(), diag.stream);
    write_grid_csv((dir / "delta_p.csv").string(), diag.delta_p);
    write_grid_csv((dir / "det_hess_stream.csv").string(), diag.det_hess_stream);
    write_pgm((dir / "stream.pgm").string(), diag.stream);
    write_pgm((dir / "delta_p.pgm").string(), diag.delta_p);
    write_report((dir / "final.txt").string(),
                 {{"t", format_double(state.t)},
                  {"energy", format_double(kinetic_energy(state, cfg))},
                  {"identity_residual_inf", format_double(diag.identity_residual_inf)},
                  {"zero_location_x", format_double(diag.zero_location.x())},
                  {"zero_location_y", format_double(diag.zero_location.y())},
                  {"divergence_inf", format_double(divergence_inf(state, cfg))}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monge-Ampere measures, comparison principles, and 2D Navier-Stokes pressure diagnostics"};
    app.require_subcommand(1);

    std::string nodes_path, problem_path, field_path, rhs_path, config_path, suite, out_dir;
    Scalar tol = 1e-8, boundary_constant = 0.0;
    int max_iters = 5000, instances = 100, steps = 100, diag_every = 10;
    std::uint64_t seed = 1;

    auto* measure = app.add_subcommand("measure", "Monge-Ampere measure of a nodal function");
    measure->add_option("--nodes", nodes_path, "node CSV (x,y,boundary_flag,value)")->required();
    measure->add_option("--out", out_dir, "output directory")->required();

    auto* solve = app.add_subcommand("solve", "convex Dirichlet solve");
    solve->add_option("--problem", problem_path,
                      "problem CSV (x,y,boundary_flag,boundary_value,mass)")
        ->required();
    solve->add_option("--tol", tol, "atom residual tolerance")->required();
    solve->add_option("--max-iters", max_iters, "sweep cap")->required();
    solve->add_option("--out", out_dir, "output directory")->required();

    auto* envelope = app.add_subcommand("envelope", "convex/concave envelope bounds of a field");
    envelope->add_option("--field", field_path, "grid CSV (i,j,x,y,value,mask)")->required();
    envelope->add_option("--tol", tol, "atom residual tolerance")->required();
    envelope->add_option("--out", out_dir, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "randomized principle suites");
    verify->add_option("--suite", suite, "comparison | strong | generalised")->required();
    verify->add_option("--instances", instances, "number of instances")->required();
    verify->add_option("--seed", seed, "master seed")->required();
    verify->add_option("--out", out_dir, "output directory")->required();

    auto* certify = app.add_subcommand("certify", "nonexistence certificate for nonpositive rhs");
    certify->add_option("--rhs", rhs_path, "grid CSV of the right-hand side")->required();
    certify->add_option("--boundary-constant", boundary_constant, "constant boundary value")
        ->required();
    certify->add_option("--out", out_dir, "output directory")->required();

    auto* ns_run = app.add_subcommand("ns-run", "Navier-Stokes run with pressure diagnostics");
    ns_run->add_option("--config", config_path, "key=value config file")->required();
    ns_run->add_option("--steps", steps, "number of time steps")->required();
    ns_run->add_option("--diag-every", diag_every, "diagnostic cadence in steps")->required();
    ns_run->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (measure->parsed()) return cmd_measure(nodes_path, out_dir);
        if (solve->parsed()) return cmd_solve(problem_path, tol, max_iters, out_dir);
        if (envelope->parsed()) return cmd_envelope(field_path, tol, out_dir);
        if (verify->parsed()) return cmd_verify(suite, instances, seed, out_dir);
        if (certify->parsed()) return cmd_certify(rhs_path, boundary_constant, out_dir);
        if (ns_run->parsed()) return cmd_ns_run(config_path, steps, diag_every, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisViolatedError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionFailedError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleDomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
