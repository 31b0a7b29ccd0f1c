#pragma once

#include <functional>
#include <vector>

#include "boussinesq/adjoint.hpp"
#include "boussinesq/control.hpp"
#include "boussinesq/forward.hpp"

namespace boussinesq {

// J(u) = sum_n tau_n [1/2 ||y_n - y_d^n||^2 + 1/2 ||theta_n - theta_d^n||^2
//                     + alpha/2 ||u^n||_Gamma^2]
// with interval-averaged targets.
double objective(const Discretization& disc, const StateTrajectory& state, const ControlField& u);

// Per-interval gradient g_n = eta kappa_n|_Gamma + alpha u^n, as a control field.
ControlField gradient_trace(const Discretization& disc, const AdjointTrajectory& adjoint, const ControlField& u);

// J'(u) v = sum_n tau_n (eta kappa_n + alpha u^n, v^n)_Gamma.
double directional_derivative(const Discretization& disc, const AdjointTrajectory& adjoint, const ControlField& u,
                              const ControlField& v);

// Proj(-(eta/alpha) kappa|_Gamma) interval by interval.
ControlField projected_adjoint_control(const Discretization& disc, const AdjointTrajectory& adjoint);

struct GradientCheckRow {
    double epsilon;
    double finite_difference;  // (J(u + eps v) - J(u - eps v)) / (2 eps)
    double adjoint;            // J'(u) v
    double relative_error;
};
std::vector<GradientCheckRow> gradient_check(const Discretization& disc, const ControlField& u, const ControlField& v,
                                             const std::vector<double>& epsilons);

struct OptIterate {
    int iteration;
    double objective;
    double residual;  // ||u^{k+1} - u^k||_{L2(I; L2(Gamma))}
};

struct OptResult {
    ControlField control;
    StateTrajectory state;
    AdjointTrajectory adjoint;
    std::vector<OptIterate> history;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
};

// Fixed-step projected gradient with step 1/alpha:
// u^{k+1} = Proj(-(eta/alpha) kappa(u^k)). Stops once ||u^{k+1} - u^k|| <= tol
// and returns u^k together with its state and adjoint, so the returned control
// satisfies the discrete projection formula to tol. Non-convergence after
// max_iter sets converged = false and returns the last iterate.
// `iterations` counts evaluated projection steps.
OptResult projected_gradient(const Discretization& disc, const ControlField& u0, double tol, int max_iter,
                             const std::function<void(const OptIterate&)>& observer = {});

}  // namespace boussinesq
