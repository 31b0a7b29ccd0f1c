#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "boussinesq/analysis.hpp"
#include "boussinesq/config.hpp"
#include "boussinesq/output.hpp"

namespace fs = std::filesystem;
using namespace boussinesq;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNotConverged = 4;

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::string out;
    std::optional<int> mesh_level;
    std::optional<int> steps;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<int> threads;
    bool vtk = false;
};

void add_common(CLI::App* app, CommonOptions& o)
{
    app->add_option("--config", o.config_path, "INI configuration file")->check(CLI::ExistingFile);
    app->add_option("--preset", o.preset, "named preset (paper-sec5)");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--mesh-level", o.mesh_level, "mesh refinement level");
    app->add_option("--steps", o.steps, "number of time steps");
    app->add_option("--tol", o.tol, "optimizer tolerance");
    app->add_option("--max-iter", o.max_iter, "optimizer iteration limit");
    app->add_option("--threads", o.threads, "worker threads for convergence studies");
    app->add_flag("--vtk", o.vtk, "also write legacy VTK field files");
}

ExperimentConfig build_config(const CommonOptions& o)
{
    ExperimentConfig c;
    if (!o.config_path.empty()) c = load_config(o.config_path);
    if (!o.preset.empty()) {
        // A preset on the command line replaces the physical setup, keeping
        // grid and solver settings from the file.
        const ExperimentConfig p = preset_config(o.preset);
        c.preset = p.preset;
        c.params = p.params;
        c.horizon = p.horizon;
        c.body_force = p.body_force;
        c.heat_source = p.heat_source;
        c.target_velocity = p.target_velocity;
        c.target_temperature = p.target_temperature;
        c.initial_velocity = p.initial_velocity;
        c.initial_temperature = p.initial_temperature;
    }
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.mesh_level) c.mesh_level = *o.mesh_level;
    if (o.steps) c.steps = *o.steps;
    if (o.tol) c.opt_tol = *o.tol;
    if (o.max_iter) c.max_iter = *o.max_iter;
    if (o.threads) c.threads = *o.threads;
    if (o.vtk) c.vtk = true;
    c.validate();
    return c;
}

Discretization make_discretization(const ExperimentConfig& c)
{
    Discretization d = discretize(build_unit_square_mesh(c.mesh_level), c.params, c.problem_data(), c.time_grid());
    d.solver_tol = c.solver_tol;
    return d;
}

// Raw control whose slice n holds the nodal values of the control data at t_n.
ControlField control_from_config(const ExperimentConfig& c, const Discretization& d)
{
    const ScalarData f = make_scalar_data(c.control);
    std::vector<Eigen::VectorXd> traces;
    for (int n = 1; n <= d.grid.steps(); ++n) {
        Eigen::VectorXd v(d.spaces.trace->size());
        for (int i = 0; i < v.size(); ++i) v[i] = f(d.grid.node(n), d.spaces.trace->positions()[i]);
        traces.push_back(v);
    }
    return ControlField::raw(d.spaces.trace, c.params.lower, c.params.upper, std::move(traces));
}

std::ofstream open_out(const fs::path& path)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string step_name(const std::string& prefix, int n, const std::string& ext)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04d.%s", prefix.c_str(), n, ext.c_str());
    return buf;
}

void write_state_fields(const ExperimentConfig& c, const Discretization& d, const StateTrajectory& s)
{
    const fs::path dir = fs::path(c.output_dir) / "fields";
    for (int n = 0; n <= s.steps(); ++n) {
        auto out = open_out(dir / step_name("state", n, "csv"));
        write_field_csv(out, d, s.velocity[n], s.pressure[n], s.temperature[n]);
        if (c.vtk) {
            auto vtk = open_out(dir / step_name("state", n, "vtk"));
            write_field_vtk(vtk, d, s.velocity[n], s.pressure[n], s.temperature[n], "state step " + std::to_string(n));
        }
    }
}

int run_solve_state(const ExperimentConfig& c)
{
    const Discretization d = make_discretization(c);
    const ControlField u = control_from_config(c, d);
    const StateTrajectory s = solve_state(d, u);
    auto summary = open_out(fs::path(c.output_dir) / "state_summary.csv");
    write_state_summary(summary, d, s);
    write_state_fields(c, d, s);
    std::printf("objective %.12e, max divergence residual %.3e\n", objective(d, s, u),
                max_divergence_residual(d, s.velocity));
    return 0;
}

int run_solve_adjoint(const ExperimentConfig& c)
{
    const Discretization d = make_discretization(c);
    const ControlField u = control_from_config(c, d);
    const StateTrajectory s = solve_state(d, u);
    const AdjointTrajectory a = solve_adjoint(d, s);
    auto summary = open_out(fs::path(c.output_dir) / "adjoint_summary.csv");
    write_adjoint_summary(summary, d, a);
    const fs::path dir = fs::path(c.output_dir) / "fields";
    for (int n = 1; n <= a.steps(); ++n) {
        auto out = open_out(dir / step_name("adjoint", n, "csv"));
        write_field_csv(out, d, a.velocity[n - 1], a.pressure[n - 1], a.temperature[n - 1], true);
        if (c.vtk) {
            auto vtk = open_out(dir / step_name("adjoint", n, "vtk"));
            write_field_vtk(vtk, d, a.velocity[n - 1], a.pressure[n - 1], a.temperature[n - 1],
                            "adjoint step " + std::to_string(n));
        }
    }
    std::printf("adjoint computed on %d steps, max divergence residual %.3e\n", a.steps(),
                max_divergence_residual(d, a.velocity));
    return 0;
}

int run_gradient_check(const ExperimentConfig& c)
{
    const Discretization d = make_discretization(c);
    const ControlField u = control_from_config(c, d);
    std::mt19937 rng(c.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Eigen::VectorXd> dir;
    for (int n = 1; n <= d.grid.steps(); ++n) {
        Eigen::VectorXd v(d.spaces.trace->size());
        for (int i = 0; i < v.size(); ++i) v[i] = dist(rng);
        dir.push_back(v);
    }
    const ControlField v = ControlField::raw(d.spaces.trace, c.params.lower, c.params.upper, std::move(dir));
    const auto rows = gradient_check(d, u, v, c.epsilons);
    auto out = open_out(fs::path(c.output_dir) / "gradient_check.csv");
    write_gradient_check_csv(out, rows);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.relative_error);
    std::printf("max relative error %.3e\n", worst);
    return 0;
}

int run_optimize(const ExperimentConfig& c)
{
    const Discretization d = make_discretization(c);
    const ControlField u0 = control_from_config(c, d);
    const OptResult r = projected_gradient(d, u0, c.opt_tol, c.max_iter, [](const OptIterate& it) {
        std::printf("iteration %3d  J = %.12e  residual = %.3e\n", it.iteration, it.objective, it.residual);
    });
    const fs::path dir(c.output_dir);
    auto history = open_out(dir / "history.csv");
    write_history_csv(history, r.history);
    auto control = open_out(dir / "control.csv");
    write_control_csv(control, d, r.control);
    auto summary = open_out(dir / "optimize_summary.csv");
    char line[256];
    std::snprintf(line, sizeof line, "iterations,converged,objective,final_residual\n%d,%d,%.12e,%.12e\n", r.iterations,
                  r.converged ? 1 : 0, r.objective, r.history.empty() ? 0.0 : r.history.back().residual);
    summary << line;
    if (!r.converged) {
        std::fprintf(stderr, "not converged after %d iterations\n", r.iterations);
        return kExitNotConverged;
    }
    std::printf("converged after %d iterations\n", r.iterations);
    return 0;
}

int run_study(const ExperimentConfig& c, const std::string& kind, bool full_scale)
{
    ExperimentConfig cfg = c;
    if (!kind.empty()) cfg.study_kind = kind == "temporal" ? StudyKind::Temporal : StudyKind::Spatial;
    if (full_scale) {
        cfg.study_levels = {3, 4, 5, 6};
        cfg.study_reference_level = 7;
        cfg.study_steps = 512;
        cfg.study_mesh_level = 7;
        cfg.study_step_counts = {8, 16, 32, 64, 128};
        cfg.study_reference_steps = 512;
    }
    cfg.validate();
    const StudyResult r = run_convergence_study(cfg.study_setup(), [](const std::string& l) { std::printf("%s\n", l.c_str()); });
    const fs::path dir(cfg.output_dir);
    const std::string stem = cfg.study_kind == StudyKind::Spatial ? "spatial" : "temporal";
    auto eoc_out = open_out(dir / (stem + "_eoc.csv"));
    write_eoc_csv(eoc_out, r);
    auto err_out = open_out(dir / (stem + "_errors.csv"));
    write_error_csv(err_out, r);
    auto runs = open_out(dir / (stem + "_runs.csv"));
    runs << "mesh_level,steps,iterations,converged,objective\n";
    bool all = true;
    for (const auto& run : r.runs) {
        char line[160];
        std::snprintf(line, sizeof line, "%d,%d,%d,%d,%.12e\n", run.mesh_level, run.steps, run.iterations,
                      run.converged ? 1 : 0, run.objective);
        runs << line;
        all = all && run.converged;
    }
    write_eoc_csv(std::cout, r);
    return all ? 0 : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimal Robin boundary control of the Boussinesq equations"};
    app.require_subcommand(1);

    CommonOptions state_opts, adjoint_opts, grad_opts, opt_opts, study_opts;
    auto* state = app.add_subcommand("solve-state", "march the state equations and dump fields");
    add_common(state, state_opts);
    auto* adjoint = app.add_subcommand("solve-adjoint", "march state and adjoint equations and dump adjoint fields");
    add_common(adjoint, adjoint_opts);
    auto* grad = app.add_subcommand("gradient-check", "compare the adjoint gradient with central differences");
    add_common(grad, grad_opts);
    auto* opt = app.add_subcommand("optimize", "run the projected-gradient method");
    add_common(opt, opt_opts);
    auto* study = app.add_subcommand("convergence-study", "spatial or temporal EOC study against a reference");
    add_common(study, study_opts);
    std::string study_kind;
    bool full_scale = false;
    study->add_option("--kind", study_kind, "spatial or temporal")->check(CLI::IsMember({"spatial", "temporal"}));
    study->add_flag("--full-scale", full_scale, "levels 3-6 against 7, steps 8-128 against 512 (slow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*state) return run_solve_state(build_config(state_opts));
        if (*adjoint) return run_solve_adjoint(build_config(adjoint_opts));
        if (*grad) return run_gradient_check(build_config(grad_opts));
        if (*opt) return run_optimize(build_config(opt_opts));
        if (*study) return run_study(build_config(study_opts), study_kind, full_scale);
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
