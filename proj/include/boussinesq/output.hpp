#pragma once

#include <iosfwd>
#include <string>

#include "boussinesq/adjoint.hpp"
#include "boussinesq/optimize.hpp"

namespace boussinesq {

// CSV writers. Numbers use fixed printf formats so identical runs give
// identical bytes.

// step,t,velocity_L2,velocity_H1_semi,pressure_L2,temperature_L2,temperature_H1_semi,
// temperature_L2_Gamma,divergence_residual; one row per n = 0..N.
void write_state_summary(std::ostream& out, const Discretization& disc, const StateTrajectory& state);
// step,t_start,adjoint_velocity_L2,adjoint_velocity_H1_semi,adjoint_pressure_L2,
// adjoint_temperature_L2,adjoint_temperature_H1_semi,adjoint_temperature_L2_Gamma,divergence_residual.
void write_adjoint_summary(std::ostream& out, const Discretization& disc, const AdjointTrajectory& adjoint);

// Vertex values x,y,velocity_x,velocity_y,pressure,temperature (bubbles
// vanish at vertices, so these are exact nodal values). Adjoint fields are
// labelled mu_x,mu_y,lambda,kappa.
void write_field_csv(std::ostream& out, const Discretization& disc, const Eigen::VectorXd& velocity,
                     const Eigen::VectorXd& pressure, const Eigen::VectorXd& temperature, bool adjoint = false);
// Legacy ASCII VTK unstructured grid with the same point data.
void write_field_vtk(std::ostream& out, const Discretization& disc, const Eigen::VectorXd& velocity,
                     const Eigen::VectorXd& pressure, const Eigen::VectorXd& temperature, const std::string& title);

// iteration,objective,residual
void write_history_csv(std::ostream& out, const std::vector<OptIterate>& history);
// step,t_start,t_end,vertex,x,y,value: control values at boundary vertices.
void write_control_csv(std::ostream& out, const Discretization& disc, const ControlField& u);
// epsilon,finite_difference,adjoint,relative_error
void write_gradient_check_csv(std::ostream& out, const std::vector<GradientCheckRow>& rows);

}  // namespace boussinesq
