#include "boussinesq/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace boussinesq {

double objective(const Discretization& disc, const StateTrajectory& state, const ControlField& u)
{
    const int N = disc.grid.steps();
    if (state.steps() != N || u.steps() != N) throw std::invalid_argument("objective: grid mismatch");
    const OperatorSet& ops = disc.ops;
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) {
        const auto& y = state.velocity[n];
        const auto& th = state.temperature[n];
        const double ey = y.dot(ops.velocity_mass * y) - 2.0 * y.dot(disc.target_velocity_load[n - 1]) +
                          disc.target_velocity_norm2[n - 1];
        const double et = th.dot(ops.scalar_mass * th) - 2.0 * th.dot(disc.target_temperature_load[n - 1]) +
                          disc.target_temperature_norm2[n - 1];
        sum += disc.grid.step(n) * (0.5 * ey + 0.5 * et + 0.5 * disc.params.alpha * boundary_inner(u, u, n));
    }
    return sum;
}

ControlField gradient_trace(const Discretization& disc, const AdjointTrajectory& adjoint, const ControlField& u)
{
    std::vector<Eigen::VectorXd> traces;
    for (int n = 1; n <= u.steps(); ++n) traces.push_back(disc.params.robin_eta * adjoint.temperature_trace(disc, n));
    const ControlField kappa = ControlField::raw(u.trace_ptr(), u.lower(), u.upper(), std::move(traces));
    return combine(1.0, kappa, disc.params.alpha, u);
}

double directional_derivative(const Discretization& disc, const AdjointTrajectory& adjoint, const ControlField& u,
                              const ControlField& v)
{
    if (adjoint.steps() != disc.grid.steps()) throw std::invalid_argument("directional_derivative: grid mismatch");
    double sum = 0.0;
    for (int n = 1; n <= disc.grid.steps(); ++n) {
        const double pairing = disc.params.robin_eta * boundary_load(v, n).dot(adjoint.temperature_trace(disc, n)) +
                               disc.params.alpha * boundary_inner(u, v, n);
        sum += disc.grid.step(n) * pairing;
    }
    return sum;
}

ControlField projected_adjoint_control(const Discretization& disc, const AdjointTrajectory& adjoint)
{
    const PhysicalParams& p = disc.params;
    std::vector<Eigen::VectorXd> args;
    for (int n = 1; n <= adjoint.steps(); ++n) args.push_back(-(p.robin_eta / p.alpha) * adjoint.temperature_trace(disc, n));
    return ControlField::clamped(disc.spaces.trace, p.lower, p.upper, std::move(args));
}

std::vector<GradientCheckRow> gradient_check(const Discretization& disc, const ControlField& u, const ControlField& v,
                                             const std::vector<double>& epsilons)
{
    const StateTrajectory state = solve_state(disc, u);
    const AdjointTrajectory adjoint = solve_adjoint(disc, state);
    const double exact = directional_derivative(disc, adjoint, u, v);
    std::vector<GradientCheckRow> rows;
    for (double eps : epsilons) {
        if (!(eps > 0.0)) throw std::invalid_argument("gradient_check: epsilon must be positive");
        const ControlField up = combine(1.0, u, eps, v);
        const ControlField um = combine(1.0, u, -eps, v);
        const double jp = objective(disc, solve_state(disc, up), up);
        const double jm = objective(disc, solve_state(disc, um), um);
        const double fd = (jp - jm) / (2.0 * eps);
        const double scale = std::abs(exact) > 0.0 ? std::abs(exact) : 1.0;
        rows.push_back({eps, fd, exact, std::abs(fd - exact) / scale});
    }
    return rows;
}

OptResult projected_gradient(const Discretization& disc, const ControlField& u0, double tol, int max_iter,
                             const std::function<void(const OptIterate&)>& observer)
{
    if (!(tol > 0.0)) throw std::invalid_argument("projected_gradient: tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("projected_gradient: max_iter must be at least 1");
    const PhysicalParams& p = disc.params;
    if (u0.lower() != p.lower || u0.upper() != p.upper) {
        throw std::invalid_argument("projected_gradient: initial control bounds differ from the parameters");
    }

    ControlField u = project_control(u0);
    OptResult result{u, {}, {}, {}, 0, 0.0, false};
    for (int k = 0; k < max_iter; ++k) {
        StateTrajectory state = solve_state(disc, u);
        AdjointTrajectory adjoint = solve_adjoint(disc, state);
        ControlField next = projected_adjoint_control(disc, adjoint);
        const OptIterate it{k, objective(disc, state, u), space_time_distance(next, u, disc.grid)};
        result.history.push_back(it);
        if (observer) observer(it);
        result.control = u;
        result.state = std::move(state);
        result.adjoint = std::move(adjoint);
        result.iterations = k + 1;
        result.objective = it.objective;
        if (it.residual <= tol) {
            result.converged = true;
            return result;
        }
        u = std::move(next);
    }
    return result;
}

}  // namespace boussinesq
