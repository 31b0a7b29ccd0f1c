#pragma once

#include <vector>

#include <Eigen/Core>

#include "boussinesq/forward.hpp"

namespace boussinesq {

// Adjoint coefficients for n = 1..N stored at index n-1; the ghost values at
// N+1 are zero and not stored.
struct AdjointTrajectory {
    std::vector<Eigen::VectorXd> velocity;     // mu
    std::vector<Eigen::VectorXd> pressure;     // lambda
    std::vector<Eigen::VectorXd> temperature;  // kappa

    int steps() const { return static_cast<int>(velocity.size()); }
    // kappa_n restricted to the boundary vertices.
    Eigen::VectorXd temperature_trace(const Discretization& disc, int n) const;
};

// Backward sweep n = N..1 with y_{N+1} = y_N, theta_{N+1} = theta_N and
// tau_{N+1} = tau_N.
AdjointTrajectory solve_adjoint(const Discretization& disc, const StateTrajectory& state);

}  // namespace boussinesq
