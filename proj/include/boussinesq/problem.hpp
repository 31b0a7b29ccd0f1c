#pragma once

#include <functional>
#include <type_traits>

#include <Eigen/Core>

#include "boussinesq/mesh.hpp"

namespace boussinesq {

struct PhysicalParams {
    double viscosity = 0.1;    // nu
    double diffusivity = 1.0;  // chi
    double buoyancy = 1.0;     // beta
    Eigen::Vector2d gravity{-10.0, 10.0};
    double robin_gamma = 1.0;
    double robin_eta = 1.0;
    double alpha = 0.1;  // control cost
    double lower = -0.2;
    double upper = 0.2;

    // Throws std::invalid_argument on non-positive coefficients or empty box.
    void validate() const;
};

// A space-time data function. An empty callable means identically zero;
// `steady` lets the discretization evaluate it once instead of per interval.
template <class Value>
struct DataFunction {
    std::function<Value(double, const Point&)> fn;
    bool steady = false;

    bool is_zero() const { return !fn; }
    Value operator()(double t, const Point& x) const
    {
        if (!fn) {
            if constexpr (std::is_same_v<Value, double>) return 0.0;
            else return Value::Zero();
        }
        return fn(t, x);
    }

    static DataFunction constant(Value v)
    {
        return {[v](double, const Point&) { return v; }, true};
    }
    static DataFunction stationary(std::function<Value(const Point&)> f)
    {
        return {[f = std::move(f)](double, const Point& x) { return f(x); }, true};
    }
};

using ScalarData = DataFunction<double>;
using VectorData = DataFunction<Eigen::Vector2d>;

// The initial velocity must be divergence free with zero trace; it is
// projected onto the discretely divergence-free subspace.
struct ProblemData {
    VectorData body_force;
    ScalarData heat_source;
    VectorData target_velocity;
    ScalarData target_temperature;
    std::function<Eigen::Vector2d(const Point&)> initial_velocity;
    std::function<double(const Point&)> initial_temperature;
    double horizon = 1.0;
};

// Parameters and data of the standard Boussinesq boundary-control benchmark
// on the unit square.
PhysicalParams benchmark_params();
ProblemData benchmark_data();

// The benchmark target velocity
// (50 x^2(x-1)^2 (2y(y-1)^2 + 2y^2(y-1)), -50 y^2(y-1)^2 (2x(x-1)^2 + 2x^2(x-1))).
Eigen::Vector2d benchmark_target_velocity(const Point& p);

}  // namespace boussinesq
