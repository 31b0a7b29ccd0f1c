#include "boussinesq/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boussinesq {

TimeGrid TimeGrid::uniform(double horizon, int steps)
{
    return graded(horizon, steps, 1.0);
}

TimeGrid TimeGrid::graded(double horizon, int steps, double exponent, StepBounds bounds)
{
    if (!(horizon > 0.0) || steps < 1) throw std::invalid_argument("TimeGrid: need T > 0 and N >= 1");
    if (!(exponent > 0.0)) throw std::invalid_argument("TimeGrid: grading exponent must be positive");
    std::vector<double> nodes(static_cast<std::size_t>(steps) + 1);
    for (int n = 0; n <= steps; ++n) {
        const double s = static_cast<double>(n) / steps;
        nodes[n] = horizon * (exponent == 1.0 ? s : std::pow(s, exponent));
    }
    nodes.back() = horizon;
    TimeGrid grid(std::move(nodes));
    grid.validate(bounds);
    return grid;
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes, StepBounds bounds)
{
    if (nodes.size() < 2 || nodes.front() != 0.0) {
        throw std::invalid_argument("TimeGrid: nodes must start at 0 and contain a step");
    }
    TimeGrid grid(std::move(nodes));
    grid.validate(bounds);
    return grid;
}

double TimeGrid::step(int n) const
{
    const int N = steps();
    if (n < 1 || n > N + 1) throw std::out_of_range("TimeGrid::step: index " + std::to_string(n));
    if (n == N + 1) n = N;
    return nodes_[n] - nodes_[n - 1];
}

double TimeGrid::max_step() const
{
    double tau = 0.0;
    for (int n = 1; n <= steps(); ++n) tau = std::max(tau, step(n));
    return tau;
}

void TimeGrid::validate(const StepBounds& bounds) const
{
    for (int n = 1; n <= steps(); ++n) {
        if (!(step(n) > 0.0)) throw std::invalid_argument("TimeGrid: nodes must increase strictly");
    }
    const double tau = max_step();
    for (int n = 1; n <= steps(); ++n) {
        if (!(tau < bounds.eps0 * step(n))) {
            throw std::invalid_argument("TimeGrid: step " + std::to_string(n) + " is too small relative to the largest step");
        }
        if (n > 1 && std::abs(step(n) - step(n - 1)) > bounds.eps1 * tau * tau) {
            throw std::invalid_argument("TimeGrid: steps " + std::to_string(n - 1) + " and " + std::to_string(n) +
                                        " vary faster than allowed");
        }
    }
}

int TimeGrid::refinement_ratio(const TimeGrid& coarse) const
{
    if (steps() % coarse.steps() != 0) return 0;
    const int ratio = steps() / coarse.steps();
    const double tol = 1e-12 * horizon();
    for (int n = 0; n <= coarse.steps(); ++n) {
        if (std::abs(nodes_[static_cast<std::size_t>(n * ratio)] - coarse.node(n)) > tol) return 0;
    }
    return ratio;
}

}  // namespace boussinesq
