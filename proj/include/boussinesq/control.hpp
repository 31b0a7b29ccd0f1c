#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "boussinesq/fem.hpp"
#include "boussinesq/time_grid.hpp"

namespace boussinesq {

// scale * clamp(argument(s), lower, upper), argument piecewise linear on Gamma.
struct ClampedTerm {
    double scale = 1.0;
    Eigen::VectorXd argument;
};

// Control on one time interval: linear(s) + sum of clamped terms. A raw slice
// has no clamped terms; a projected slice is a single term of scale 1.
struct ControlSlice {
    Eigen::VectorXd linear;
    std::vector<ClampedTerm> clamped;
};

// Boundary control, piecewise constant in time on the intervals of a grid.
// Vectors are indexed by the trace-local boundary vertex numbering.
class ControlField {
public:
    ControlField(std::shared_ptr<const BoundaryTrace> trace, double lower, double upper,
                 std::vector<ControlSlice> slices);

    static ControlField zero(std::shared_ptr<const BoundaryTrace> trace, int steps, double lower, double upper);
    static ControlField raw(std::shared_ptr<const BoundaryTrace> trace, double lower, double upper,
                            std::vector<Eigen::VectorXd> traces);
    // Slice n is clamp(arguments[n-1], lower, upper).
    static ControlField clamped(std::shared_ptr<const BoundaryTrace> trace, double lower, double upper,
                                std::vector<Eigen::VectorXd> arguments);

    int steps() const { return static_cast<int>(slices_.size()); }
    const BoundaryTrace& trace() const { return *trace_; }
    const std::shared_ptr<const BoundaryTrace>& trace_ptr() const { return trace_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    const ControlSlice& slice(int n) const { return slices_.at(static_cast<std::size_t>(n - 1)); }
    const std::vector<ControlSlice>& slices() const { return slices_; }

    bool is_raw() const;
    // Value on interval n at the point s in [0, 1] of boundary edge e.
    double value(int n, int edge, double s) const;
    double vertex_value(int n, int trace_vertex) const;

private:
    std::shared_ptr<const BoundaryTrace> trace_;
    double lower_, upper_;
    std::vector<ControlSlice> slices_;
};

double clamp_value(double v, double lower, double upper);

// a*u + b*v; both fields must share trace, bounds and interval count.
ControlField combine(double a, const ControlField& u, double b, const ControlField& v);

// Pointwise projection onto [lower, upper]. Raw fields become clamped fields;
// a field that is already a pure projection is returned unchanged. Anything
// else throws std::invalid_argument.
ControlField project_control(const ControlField& u);

// (u^n, psi_i)_Gamma for every trace vertex i, exact.
Eigen::VectorXd boundary_load(const ControlField& u, int n);
// (u^n, v^n)_Gamma, exact.
double boundary_inner(const ControlField& u, const ControlField& v, int n);
// sum_n tau_n (u^n, v^n)_Gamma and the induced distance in L2(I; L2(Gamma)).
double space_time_inner(const ControlField& u, const ControlField& v, const TimeGrid& grid);
double space_time_distance(const ControlField& u, const ControlField& v, const TimeGrid& grid);

}  // namespace boussinesq
