#include "boussinesq/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace boussinesq {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

double norm(const Eigen::VectorXd& v, const SparseMatrix& m)
{
    return std::sqrt(std::max(0.0, v.dot(m * v)));
}

double pressure_l2(const Discretization& disc, const Eigen::VectorXd& p)
{
    // The pressure space shares its P1 mass matrix with the temperature space.
    return norm(p, disc.ops.scalar_mass);
}

}  // namespace

void write_state_summary(std::ostream& out, const Discretization& disc, const StateTrajectory& state)
{
    const OperatorSet& ops = disc.ops;
    out << "step,t,velocity_L2,velocity_H1_semi,pressure_L2,temperature_L2,temperature_H1_semi,temperature_L2_Gamma,"
           "divergence_residual\n";
    for (int n = 0; n <= state.steps(); ++n) {
        const auto& y = state.velocity[n];
        const auto& th = state.temperature[n];
        out << n << ',' << num(disc.grid.node(n)) << ',' << num(norm(y, ops.velocity_mass)) << ','
            << num(norm(y, ops.velocity_stiffness)) << ',' << num(pressure_l2(disc, state.pressure[n])) << ','
            << num(norm(th, ops.scalar_mass)) << ',' << num(norm(th, ops.scalar_stiffness)) << ','
            << num(norm(th, ops.boundary_mass)) << ',' << num((ops.divergence * y).lpNorm<Eigen::Infinity>()) << '\n';
    }
}

void write_adjoint_summary(std::ostream& out, const Discretization& disc, const AdjointTrajectory& adjoint)
{
    const OperatorSet& ops = disc.ops;
    out << "step,t_start,adjoint_velocity_L2,adjoint_velocity_H1_semi,adjoint_pressure_L2,adjoint_temperature_L2,"
           "adjoint_temperature_H1_semi,adjoint_temperature_L2_Gamma,divergence_residual\n";
    for (int n = 1; n <= adjoint.steps(); ++n) {
        const auto& mu = adjoint.velocity[n - 1];
        const auto& ka = adjoint.temperature[n - 1];
        out << n << ',' << num(disc.grid.node(n - 1)) << ',' << num(norm(mu, ops.velocity_mass)) << ','
            << num(norm(mu, ops.velocity_stiffness)) << ',' << num(pressure_l2(disc, adjoint.pressure[n - 1])) << ','
            << num(norm(ka, ops.scalar_mass)) << ',' << num(norm(ka, ops.scalar_stiffness)) << ','
            << num(norm(ka, ops.boundary_mass)) << ',' << num((ops.divergence * mu).lpNorm<Eigen::Infinity>()) << '\n';
    }
}

void write_field_csv(std::ostream& out, const Discretization& disc, const Eigen::VectorXd& velocity,
                     const Eigen::VectorXd& pressure, const Eigen::VectorXd& temperature, bool adjoint)
{
    const Mesh& mesh = *disc.spaces.mesh;
    const int stride = disc.spaces.velocity->component_stride();
    out << (adjoint ? "x,y,mu_x,mu_y,lambda,kappa\n" : "x,y,velocity_x,velocity_y,pressure,temperature\n");
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        out << num(mesh.vertices[v].x()) << ',' << num(mesh.vertices[v].y()) << ',' << num(velocity[v]) << ','
            << num(velocity[stride + v]) << ',' << num(pressure[v]) << ',' << num(temperature[v]) << '\n';
    }
}

void write_field_vtk(std::ostream& out, const Discretization& disc, const Eigen::VectorXd& velocity,
                     const Eigen::VectorXd& pressure, const Eigen::VectorXd& temperature, const std::string& title)
{
    const Mesh& mesh = *disc.spaces.mesh;
    const int nv = mesh.num_vertices(), nt = mesh.num_triangles();
    const int stride = disc.spaces.velocity->component_stride();
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const auto& p : mesh.vertices) out << num(p.x()) << ' ' << num(p.y()) << " 0\n";
    out << "CELLS " << nt << ' ' << 4 * nt << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << nt << '\n';
    for (int t = 0; t < nt; ++t) out << "5\n";
    out << "POINT_DATA " << nv << "\nVECTORS velocity double\n";
    for (int v = 0; v < nv; ++v) out << num(velocity[v]) << ' ' << num(velocity[stride + v]) << " 0\n";
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << num(pressure[v]) << '\n';
    out << "SCALARS temperature double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << num(temperature[v]) << '\n';
}

void write_history_csv(std::ostream& out, const std::vector<OptIterate>& history)
{
    out << "iteration,objective,residual\n";
    for (const auto& h : history) out << h.iteration << ',' << num(h.objective) << ',' << num(h.residual) << '\n';
}

void write_control_csv(std::ostream& out, const Discretization& disc, const ControlField& u)
{
    const BoundaryTrace& trace = u.trace();
    out << "step,t_start,t_end,vertex,x,y,value\n";
    for (int n = 1; n <= u.steps(); ++n) {
        for (int i = 0; i < trace.size(); ++i) {
            out << n << ',' << num(disc.grid.node(n - 1)) << ',' << num(disc.grid.node(n)) << ',' << trace.vertices()[i]
                << ',' << num(trace.positions()[i].x()) << ',' << num(trace.positions()[i].y()) << ','
                << num(u.vertex_value(n, i)) << '\n';
        }
    }
}

void write_gradient_check_csv(std::ostream& out, const std::vector<GradientCheckRow>& rows)
{
    out << "epsilon,finite_difference,adjoint,relative_error\n";
    for (const auto& r : rows) {
        out << num(r.epsilon) << ',' << num(r.finite_difference) << ',' << num(r.adjoint) << ',' << num(r.relative_error)
            << '\n';
    }
}

}  // namespace boussinesq
