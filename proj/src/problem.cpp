#include "boussinesq/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boussinesq {

void PhysicalParams::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(viscosity, "viscosity");
    positive(diffusivity, "diffusivity");
    positive(robin_gamma, "robin_gamma");
    positive(robin_eta, "robin_eta");
    positive(alpha, "alpha");
    if (!std::isfinite(buoyancy) || !gravity.allFinite()) {
        throw std::invalid_argument("buoyancy and gravity must be finite");
    }
    if (!(lower < upper)) throw std::invalid_argument("control bounds must satisfy lower < upper");
}

PhysicalParams benchmark_params()
{
    PhysicalParams p;
    p.viscosity = 0.1;
    p.diffusivity = 1.0;
    p.buoyancy = 1.0;
    p.gravity = {-10.0, 10.0};
    p.robin_gamma = 1.0;
    p.robin_eta = 1.0;
    p.alpha = 0.1;
    p.lower = -0.2;
    p.upper = 0.2;
    return p;
}

Eigen::Vector2d benchmark_target_velocity(const Point& p)
{
    const double x = p.x(), y = p.y();
    const double x2 = x * x * (x - 1.0) * (x - 1.0);
    const double y2 = y * y * (y - 1.0) * (y - 1.0);
    const double dy = 2.0 * y * (y - 1.0) * (y - 1.0) + 2.0 * y * y * (y - 1.0);
    const double dx = 2.0 * x * (x - 1.0) * (x - 1.0) + 2.0 * x * x * (x - 1.0);
    return {50.0 * x2 * dy, -50.0 * y2 * dx};
}

ProblemData benchmark_data()
{
    ProblemData data;
    data.target_velocity = VectorData::stationary(benchmark_target_velocity);
    data.horizon = 1.0;
    return data;
}

}  // namespace boussinesq
