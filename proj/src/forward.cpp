#include "boussinesq/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boussinesq {

namespace {

template <class Value>
void averaged_loads(const DataFunction<Value>& f, const FunctionSpace& space, const TimeGrid& grid,
                    std::vector<Eigen::VectorXd>& loads, std::vector<double>& norms)
{
    const int N = grid.steps();
    loads.assign(static_cast<std::size_t>(N), Eigen::VectorXd::Zero(space.num_dofs()));
    norms.assign(static_cast<std::size_t>(N), 0.0);
    if (f.is_zero()) return;
    for (int n = 1; n <= N; ++n) {
        if (f.steady && n > 1) {
            loads[n - 1] = loads[0];
            norms[n - 1] = norms[0];
            continue;
        }
        const std::function<Value(const Point&)> avg = time_averaged(f, grid, n);
        loads[n - 1] = assemble_load(space, avg);
        norms[n - 1] = integrate_squared(space.mesh(), avg);
    }
}

struct StepMatrices {
    SparseMatrix velocity;  // M_v / tau + nu K_v + N(y_{n-1})
    SparseMatrix heat;      // M / tau + chi K + N_s(y_{n-1}) + eta gamma M_Gamma
};

StepMatrices step_matrices(const Discretization& disc, int n, const Eigen::VectorXd& y_prev)
{
    const double tau = disc.grid.step(n);
    const PhysicalParams& p = disc.params;
    const FEField w(disc.spaces.velocity, y_prev);
    StepMatrices m;
    m.velocity = disc.ops.velocity_mass / tau + p.viscosity * disc.ops.velocity_stiffness +
                 assemble_convection_velocity(w);
    m.heat = disc.ops.scalar_mass / tau + p.diffusivity * disc.ops.scalar_stiffness +
             assemble_convection_scalar(w, *disc.spaces.scalar) +
             (p.robin_eta * p.robin_gamma) * disc.ops.boundary_mass;
    return m;
}

struct CoupledRhs {
    Eigen::VectorXd velocity, temperature;
};

StepResult solve_step(const Discretization& disc, int n, const StepMatrices& m, const CoupledRhs& rhs,
                      StepSolvers& solvers)
{
    StepResult out;
    try {
        const SaddleSolution s = solvers.velocity.solve({m.velocity, disc.saddle}, rhs.velocity, disc.solver_tol);
        out.velocity = s.velocity;
        out.pressure = s.pressure;
        out.temperature = solvers.heat.solve(m.heat, rhs.temperature, disc.solver_tol).solution;
    } catch (const SolverError& e) {
        throw StepError(std::string(e.what()) + " at step " + std::to_string(n), e.residual(), n);
    }
    return out;
}

void check_control(const Discretization& disc, const ControlField& u)
{
    if (u.steps() != disc.grid.steps() || u.trace().size() != disc.spaces.trace->size()) {
        throw std::invalid_argument("control does not match the discretization");
    }
}

}  // namespace

Discretization discretize(std::shared_ptr<const Mesh> mesh, const PhysicalParams& params, const ProblemData& data,
                          const TimeGrid& grid)
{
    params.validate();
    if (std::abs(grid.horizon() - data.horizon) > 1e-12 * std::max(1.0, data.horizon)) {
        throw std::invalid_argument("time grid horizon differs from the problem horizon");
    }
    Discretization d{Spaces::on(std::move(mesh)), {}, params, grid, nullptr, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    d.ops = assemble_operator_set(d.spaces, params.gravity);
    d.saddle = SaddleBlocks::make(d.ops.divergence, d.ops.pressure_mean, d.spaces.velocity->boundary_dofs());

    const FunctionSpace& vel = *d.spaces.velocity;
    const FunctionSpace& sca = *d.spaces.scalar;
    averaged_loads(data.body_force, vel, grid, d.body_load, d.body_norm2);
    averaged_loads(data.heat_source, sca, grid, d.heat_load, d.heat_norm2);
    averaged_loads(data.target_velocity, vel, grid, d.target_velocity_load, d.target_velocity_norm2);
    averaged_loads(data.target_temperature, sca, grid, d.target_temperature_load, d.target_temperature_norm2);

    d.initial_velocity = Eigen::VectorXd::Zero(vel.num_dofs());
    if (data.initial_velocity) {
        const Eigen::VectorXd load = assemble_load(vel, data.initial_velocity);
        d.initial_velocity = solve_saddle({d.ops.velocity_mass, d.saddle}, load, d.solver_tol).velocity;
    }
    d.initial_temperature = Eigen::VectorXd::Zero(sca.num_dofs());
    if (data.initial_temperature) d.initial_temperature = l2_project(d.spaces.scalar, data.initial_temperature).coefficients;
    return d;
}

Eigen::VectorXd control_source(const Discretization& disc, const ControlField& u, int n)
{
    const BoundaryTrace& trace = *disc.spaces.trace;
    return disc.params.robin_eta * trace.extend(boundary_load(u, n), disc.spaces.mesh->num_vertices());
}

StepResult advance_state(const Discretization& disc, int n, const Eigen::VectorXd& y_prev,
                         const Eigen::VectorXd& theta_prev, const Eigen::VectorXd& boundary_source,
                         StepSolvers& solvers)
{
    const double tau = disc.grid.step(n);
    const StepMatrices m = step_matrices(disc, n, y_prev);
    CoupledRhs rhs;
    rhs.velocity = disc.ops.velocity_mass * y_prev / tau - disc.params.buoyancy * (disc.ops.buoyancy * theta_prev) +
                   disc.body_load[n - 1];
    rhs.temperature = disc.ops.scalar_mass * theta_prev / tau + disc.heat_load[n - 1] + boundary_source;
    return solve_step(disc, n, m, rhs, solvers);
}

StateTrajectory solve_state(const Discretization& disc, const ControlField& u)
{
    check_control(disc, u);
    const int N = disc.grid.steps();
    StateTrajectory s;
    s.velocity.reserve(static_cast<std::size_t>(N) + 1);
    s.pressure.reserve(static_cast<std::size_t>(N) + 1);
    s.temperature.reserve(static_cast<std::size_t>(N) + 1);
    s.velocity.push_back(disc.initial_velocity);
    s.pressure.push_back(Eigen::VectorXd::Zero(disc.spaces.pressure->num_dofs()));
    s.temperature.push_back(disc.initial_temperature);
    StepSolvers solvers;
    for (int n = 1; n <= N; ++n) {
        StepResult r = advance_state(disc, n, s.velocity[n - 1], s.temperature[n - 1], control_source(disc, u, n), solvers);
        s.velocity.push_back(std::move(r.velocity));
        s.pressure.push_back(std::move(r.pressure));
        s.temperature.push_back(std::move(r.temperature));
    }
    return s;
}

StateTrajectory solve_linearized_state(const Discretization& disc, const StateTrajectory& base, const ControlField& v)
{
    check_control(disc, v);
    const int N = disc.grid.steps();
    if (base.steps() != N) throw std::invalid_argument("solve_linearized_state: base trajectory length mismatch");
    const auto& vel = disc.spaces.velocity;
    const auto& sca = disc.spaces.scalar;
    StateTrajectory s;
    s.velocity.push_back(Eigen::VectorXd::Zero(vel->num_dofs()));
    s.pressure.push_back(Eigen::VectorXd::Zero(disc.spaces.pressure->num_dofs()));
    s.temperature.push_back(Eigen::VectorXd::Zero(sca->num_dofs()));
    StepSolvers solvers;
    for (int n = 1; n <= N; ++n) {
        const double tau = disc.grid.step(n);
        const StepMatrices m = step_matrices(disc, n, base.velocity[n - 1]);
        const FEField z_prev(vel, s.velocity[n - 1]);
        CoupledRhs rhs;
        rhs.velocity = disc.ops.velocity_mass * s.velocity[n - 1] / tau -
                       assemble_trilinear_vector(TrilinearForm::VelocityLastSlot, z_prev, FEField(vel, base.velocity[n])) -
                       disc.params.buoyancy * (disc.ops.buoyancy * s.temperature[n - 1]);
        rhs.temperature = disc.ops.scalar_mass * s.temperature[n - 1] / tau -
                          assemble_trilinear_vector(TrilinearForm::ScalarLastSlot, z_prev, FEField(sca, base.temperature[n])) +
                          control_source(disc, v, n);
        StepResult r = solve_step(disc, n, m, rhs, solvers);
        s.velocity.push_back(std::move(r.velocity));
        s.pressure.push_back(std::move(r.pressure));
        s.temperature.push_back(std::move(r.temperature));
    }
    return s;
}

bool EnergyCheck::holds() const
{
    if (!valid) return false;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        if (!std::isfinite(lhs[k]) || !(lhs[k] <= rhs[k])) return false;
    }
    return true;
}

EnergyCheck energy_check(const Discretization& disc, const StateTrajectory& state, const ControlField& u)
{
    check_control(disc, u);
    const PhysicalParams& p = disc.params;
    const OperatorSet& ops = disc.ops;
    const int N = disc.grid.steps();
    const double c = 1.0 + std::abs(p.buoyancy) * p.gravity.norm();

    auto energy = [&](int n) {
        const auto& y = state.velocity[n];
        const auto& th = state.temperature[n];
        return y.dot(ops.velocity_mass * y) + th.dot(ops.scalar_mass * th);
    };

    EnergyCheck check;
    check.valid = c * disc.grid.max_step() < 1.0;
    const double e0 = energy(0);
    check.lhs.push_back(e0);
    check.rhs.push_back(e0);
    double dissipation = 0.0, data_sum = 0.0, gronwall = 0.0, r_prev = e0;
    for (int n = 1; n <= N; ++n) {
        const double tau = disc.grid.step(n);
        const auto& y = state.velocity[n];
        const auto& th = state.temperature[n];
        dissipation += tau * (2.0 * p.viscosity * y.dot(ops.velocity_stiffness * y) +
                              2.0 * p.diffusivity * th.dot(ops.scalar_stiffness * th) +
                              p.robin_eta * p.robin_gamma * th.dot(ops.boundary_mass * th));
        const double f = disc.body_norm2[n - 1] + disc.heat_norm2[n - 1] +
                         (p.robin_eta / p.robin_gamma) * boundary_inner(u, u, n);
        const double r = ((1.0 + c * tau) * r_prev + tau * f) / (1.0 - c * tau);
        data_sum += tau * f;
        gronwall += c * tau * (r + r_prev);
        r_prev = r;
        check.lhs.push_back(energy(n) + dissipation);
        check.rhs.push_back(e0 + data_sum + gronwall);
    }
    return check;
}

double max_divergence_residual(const Discretization& disc, const std::vector<Eigen::VectorXd>& velocities)
{
    double worst = 0.0;
    for (const auto& y : velocities) worst = std::max(worst, (disc.ops.divergence * y).lpNorm<Eigen::Infinity>());
    return worst;
}

}  // namespace boussinesq
