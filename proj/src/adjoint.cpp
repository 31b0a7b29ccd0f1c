#include "boussinesq/adjoint.hpp"

#include <stdexcept>
#include <string>

namespace boussinesq {

Eigen::VectorXd AdjointTrajectory::temperature_trace(const Discretization& disc, int n) const
{
    return disc.spaces.trace->restrict(temperature.at(static_cast<std::size_t>(n - 1)));
}

AdjointTrajectory solve_adjoint(const Discretization& disc, const StateTrajectory& state)
{
    const int N = disc.grid.steps();
    if (state.steps() != N) throw std::invalid_argument("solve_adjoint: state trajectory length mismatch");
    const PhysicalParams& p = disc.params;
    const OperatorSet& ops = disc.ops;
    const auto& vel = disc.spaces.velocity;
    const auto& sca = disc.spaces.scalar;

    AdjointTrajectory adj;
    adj.velocity.assign(static_cast<std::size_t>(N), Eigen::VectorXd::Zero(vel->num_dofs()));
    adj.pressure.assign(static_cast<std::size_t>(N), Eigen::VectorXd::Zero(disc.spaces.pressure->num_dofs()));
    adj.temperature.assign(static_cast<std::size_t>(N), Eigen::VectorXd::Zero(sca->num_dofs()));

    SaddleSolver velocity_solver;
    DirectSolver heat_solver;
    Eigen::VectorXd mu_next = Eigen::VectorXd::Zero(vel->num_dofs());
    Eigen::VectorXd kappa_next = Eigen::VectorXd::Zero(sca->num_dofs());
    for (int n = N; n >= 1; --n) {
        const double tau = disc.grid.step(n);
        const double ratio = disc.grid.step(n + 1) / tau;
        const int next = std::min(n + 1, N);
        const FEField w(vel, state.velocity[n - 1]);

        const SparseMatrix a = SparseMatrix((ops.velocity_mass / tau + p.viscosity * ops.velocity_stiffness +
                                             assemble_convection_velocity(w))
                                                .transpose());
        const SparseMatrix h = SparseMatrix((ops.scalar_mass / tau + p.diffusivity * ops.scalar_stiffness +
                                             assemble_convection_scalar(w, *sca) +
                                             (p.robin_eta * p.robin_gamma) * ops.boundary_mass)
                                                .transpose());

        Eigen::VectorXd rhs_v = ops.velocity_mass * (mu_next / tau + state.velocity[n]) - disc.target_velocity_load[n - 1];
        Eigen::VectorXd rhs_h =
            ops.scalar_mass * (kappa_next / tau + state.temperature[n]) - disc.target_temperature_load[n - 1];
        if (n < N) {
            rhs_v -= ratio * (assemble_trilinear_vector(TrilinearForm::VelocityFirstSlot, FEField(vel, state.velocity[next]),
                                                        FEField(vel, mu_next)) +
                              assemble_trilinear_vector(TrilinearForm::ScalarFirstSlot, FEField(sca, state.temperature[next]),
                                                        FEField(sca, kappa_next), vel.get()));
            rhs_h -= ratio * p.buoyancy * (ops.buoyancy.transpose() * mu_next);
        }

        try {
            const SaddleSolution s = velocity_solver.solve({a, disc.saddle}, rhs_v, disc.solver_tol);
            adj.velocity[n - 1] = s.velocity;
            adj.pressure[n - 1] = s.pressure;
            adj.temperature[n - 1] = heat_solver.solve(h, rhs_h, disc.solver_tol).solution;
        } catch (const SolverError& e) {
            throw StepError(std::string(e.what()) + " at adjoint step " + std::to_string(n), e.residual(), n);
        }
        mu_next = adj.velocity[n - 1];
        kappa_next = adj.temperature[n - 1];
    }
    return adj;
}

}  // namespace boussinesq
