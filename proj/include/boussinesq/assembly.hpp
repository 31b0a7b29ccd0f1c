#pragma once

#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "boussinesq/fem.hpp"
#include "boussinesq/problem.hpp"
#include "boussinesq/time_grid.hpp"

namespace boussinesq {

// Compressed row storage with sorted, unique column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

struct Spaces {
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<const FunctionSpace> velocity;  // Mini
    std::shared_ptr<const FunctionSpace> pressure;  // P1
    std::shared_ptr<const FunctionSpace> scalar;    // P1 temperature
    std::shared_ptr<const BoundaryTrace> trace;

    static Spaces on(std::shared_ptr<const Mesh> mesh);
};

struct OperatorSet {
    SparseMatrix velocity_mass;
    SparseMatrix velocity_stiffness;
    SparseMatrix divergence;  // rows pressure, columns velocity: -int q div v
    SparseMatrix scalar_mass;
    SparseMatrix scalar_stiffness;
    SparseMatrix boundary_mass;  // (theta, psi)_Gamma on the scalar space
    SparseMatrix buoyancy;       // (theta g, v); rows velocity, columns scalar
    Eigen::VectorXd pressure_mean;  // int q
};

OperatorSet assemble_operator_set(const Spaces& spaces, const Eigen::Vector2d& gravity);

// N(w) with v^T N u = b(w, u, v) on the velocity space / the scalar space.
SparseMatrix assemble_convection_velocity(const FEField& w);
SparseMatrix assemble_convection_scalar(const FEField& w, const FunctionSpace& scalar);

enum class TrilinearForm {
    VelocityFirstSlot,  // V_i = b(phi_i, f1, f2), f1, f2 velocities, velocity test
    VelocityLastSlot,   // V_i = b(f1, f2, phi_i), f1, f2 velocities, velocity test
    ScalarFirstSlot,    // V_i = b(phi_i, f1, f2), f1, f2 scalars, velocity test
    ScalarLastSlot,     // V_i = b(f1, f2, psi_i), f1 velocity, f2 scalar, scalar test
};

// For the first-slot scalar form the velocity test space must be passed.
Eigen::VectorXd assemble_trilinear_vector(TrilinearForm form, const FEField& f1, const FEField& f2,
                                          const FunctionSpace* velocity_test = nullptr);

// Load vectors (f, phi_i) with the degree-14 data rule.
Eigen::VectorXd assemble_load(const FunctionSpace& space, const std::function<double(const Point&)>& f);
Eigen::VectorXd assemble_load(const FunctionSpace& space, const std::function<Eigen::Vector2d(const Point&)>& f);
// int |f|^2 with the same rule.
double integrate_squared(const Mesh& mesh, const std::function<double(const Point&)>& f);
double integrate_squared(const Mesh& mesh, const std::function<Eigen::Vector2d(const Point&)>& f);

// Interval average (1/tau_n) int_{I_n} data(t) dt with 5-point Gauss in time.
template <class F>
auto time_average(const F& data, const TimeGrid& grid, int n)
{
    if (n < 1 || n > grid.steps()) throw std::out_of_range("time_average: step index out of range");
    const double a = grid.node(n - 1), b = grid.node(n);
    const LineRule& rule = gauss_legendre(5);
    using Value = std::decay_t<decltype(data(a))>;
    Value sum = rule.weights[0] * data(a + rule.points[0] * (b - a));
    for (std::size_t q = 1; q < rule.points.size(); ++q) {
        sum += rule.weights[q] * data(a + rule.points[q] * (b - a));
    }
    return sum;
}

// Spatial function x -> (1/tau_n) int_{I_n} f(t, x) dt.
template <class Value>
std::function<Value(const Point&)> time_averaged(const DataFunction<Value>& f, const TimeGrid& grid, int n)
{
    if (f.steady) {
        const double t = grid.node(n);
        return [f, t](const Point& x) { return f(t, x); };
    }
    return [f, &grid, n](const Point& x) {
        return time_average([&](double t) { return f(t, x); }, grid, n);
    };
}

}  // namespace boussinesq
