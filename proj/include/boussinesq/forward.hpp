#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "boussinesq/assembly.hpp"
#include "boussinesq/control.hpp"
#include "boussinesq/linsolve.hpp"
#include "boussinesq/problem.hpp"
#include "boussinesq/time_grid.hpp"

namespace boussinesq {

// Everything the time steppers need that does not depend on the control:
// spaces, time-independent operators, interval-averaged data loads.
// Per-interval vectors are indexed by n-1.
struct Discretization {
    Spaces spaces;
    OperatorSet ops;
    PhysicalParams params;
    TimeGrid grid;
    std::shared_ptr<const SaddleBlocks> saddle;

    std::vector<Eigen::VectorXd> body_load;           // (h^n, v)
    std::vector<Eigen::VectorXd> heat_load;           // (f^n, psi)
    std::vector<Eigen::VectorXd> target_velocity_load;     // (y_d^n, v)
    std::vector<Eigen::VectorXd> target_temperature_load;  // (theta_d^n, psi)
    std::vector<double> target_velocity_norm2;        // ||y_d^n||^2
    std::vector<double> target_temperature_norm2;     // ||theta_d^n||^2
    std::vector<double> body_norm2;                   // ||h^n||^2
    std::vector<double> heat_norm2;                   // ||f^n||^2

    Eigen::VectorXd initial_velocity;     // discretely divergence-free L2 projection of y_0
    Eigen::VectorXd initial_temperature;  // L2 projection of theta_0

    double solver_tol = 1e-10;
};

// Validates params and grid, assembles operators and data. Throws
// std::invalid_argument when the grid horizon differs from data.horizon.
Discretization discretize(std::shared_ptr<const Mesh> mesh, const PhysicalParams& params, const ProblemData& data,
                          const TimeGrid& grid);

// Coefficients for n = 0..N. pressure[0] is zero.
struct StateTrajectory {
    std::vector<Eigen::VectorXd> velocity;
    std::vector<Eigen::VectorXd> pressure;
    std::vector<Eigen::VectorXd> temperature;

    int steps() const { return static_cast<int>(velocity.size()) - 1; }
};

// Thrown when a linear solve fails inside a time loop.
class StepError : public SolverError {
public:
    StepError(const std::string& what, double residual, int step) : SolverError(what, residual), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

// Reusable per-step solvers; keep one per time loop so symbolic
// factorizations are shared across steps.
struct StepSolvers {
    SaddleSolver velocity;
    DirectSolver heat;
};

// One step of the state scheme: (y_n, p_n, theta_n) from (y_{n-1}, theta_{n-1}).
struct StepResult {
    Eigen::VectorXd velocity, pressure, temperature;
};
StepResult advance_state(const Discretization& disc, int n, const Eigen::VectorXd& y_prev,
                         const Eigen::VectorXd& theta_prev, const Eigen::VectorXd& boundary_source,
                         StepSolvers& solvers);

// eta (u^n, psi)_Gamma on the full scalar space.
Eigen::VectorXd control_source(const Discretization& disc, const ControlField& u, int n);

StateTrajectory solve_state(const Discretization& disc, const ControlField& u);

// Linearization of the state at `base` in direction v: (velocity z, temperature xi).
StateTrajectory solve_linearized_state(const Discretization& disc, const StateTrajectory& base, const ControlField& v);

// Discrete energy estimate. lhs[k] = ||y_k||^2 + ||theta_k||^2
// + sum_{n<=k} tau_n (2 nu |y_n|_1^2 + 2 chi |theta_n|_1^2 + eta gamma ||theta_n||_Gamma^2),
// rhs[k] is the Gronwall-type bound built from the data. Requires
// c tau < 1 with c = 1 + |beta| |g|; `valid` is false otherwise.
struct EnergyCheck {
    std::vector<double> lhs, rhs;
    bool valid = false;
    bool holds() const;
};
EnergyCheck energy_check(const Discretization& disc, const StateTrajectory& state, const ControlField& u);

// max_n ||B y_n||_inf.
double max_divergence_residual(const Discretization& disc, const std::vector<Eigen::VectorXd>& velocities);

}  // namespace boussinesq
