#pragma once

#include <vector>

namespace boussinesq {

// Bounds of the step-size assumption: max step < eps0 * every step, and
// |tau_n - tau_{n-1}| <= eps1 * (max step)^2.
struct StepBounds {
    double eps0 = 4.0;
    double eps1 = 4.0;
};

// Partition 0 = t_0 < ... < t_N = T. Steps are 1-based: step(n) = t_n - t_{n-1}
// for 1 <= n <= N, and step(N+1) = step(N) is the ghost step used by the
// adjoint recursion.
class TimeGrid {
public:
    static TimeGrid uniform(double horizon, int steps);
    // t_n = T (n/N)^r, validated against the bounds.
    static TimeGrid graded(double horizon, int steps, double exponent, StepBounds bounds = {});
    static TimeGrid from_nodes(std::vector<double> nodes, StepBounds bounds = {});

    int steps() const { return static_cast<int>(nodes_.size()) - 1; }
    double horizon() const { return nodes_.back(); }
    double node(int n) const { return nodes_.at(static_cast<std::size_t>(n)); }
    const std::vector<double>& nodes() const { return nodes_; }
    double step(int n) const;
    double max_step() const;

    // Throws std::invalid_argument when the step assumption is violated.
    void validate(const StepBounds& bounds) const;

    // Number of fine intervals per coarse interval if every coarse node is a
    // fine node and the subdivision is uniform in count; 0 otherwise.
    int refinement_ratio(const TimeGrid& coarse) const;

private:
    explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
    std::vector<double> nodes_;
};

}  // namespace boussinesq
