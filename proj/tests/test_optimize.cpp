#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "boussinesq/optimize.hpp"
#include "support/test_support.hpp"

using namespace boussinesq;
using testing_support::random_control;

namespace {

Discretization benchmark(int level, int steps)
{
    return discretize(build_unit_square_mesh(level), benchmark_params(), benchmark_data(), TimeGrid::uniform(1.0, steps));
}

}  // namespace

TEST(Optimize, ObjectiveOfZeroProblemIsZero)
{
    const Discretization disc = discretize(build_unit_square_mesh(2), benchmark_params(), ProblemData{},
                                           TimeGrid::uniform(1.0, 4));
    const ControlField u = ControlField::zero(disc.spaces.trace, 4, -0.2, 0.2);
    EXPECT_EQ(objective(disc, solve_state(disc, u), u), 0.0);
}

TEST(Optimize, ObjectiveMatchesPointwiseQuadrature)
{
    const Discretization disc = benchmark(2, 4);
    std::mt19937 rng(51);
    const ControlField u = project_control(random_control(disc, rng, -0.4, 0.4));
    const StateTrajectory s = solve_state(disc, u);
    const Mesh& mesh = *disc.spaces.mesh;
    const QuadratureRule& rule = quadrature_rule(kMaxTriangleDegree);
    double expected = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const FEField y(disc.spaces.velocity, s.velocity[n]);
        const FEField th(disc.spaces.scalar, s.temperature[n]);
        double misfit = 0.0;
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const auto g = TriangleGeometry::of(mesh, t);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Point x = g.map(rule.points[q]);
                const double w = rule.weights[q] * g.area;
                misfit += w * ((evaluate_velocity(y, t, rule.points[q]) - benchmark_target_velocity(x)).squaredNorm() +
                               std::pow(evaluate_scalar(th, t, rule.points[q]), 2));
            }
        }
        expected += disc.grid.step(n) * (0.5 * misfit + 0.5 * disc.params.alpha * boundary_inner(u, u, n));
    }
    const double j = objective(disc, s, u);
    EXPECT_NEAR(j, expected, 1e-11 * expected);
}

TEST(Optimize, GradientTraceLimits)
{
    const Discretization zero = discretize(build_unit_square_mesh(2), benchmark_params(), ProblemData{},
                                           TimeGrid::uniform(1.0, 4));
    std::mt19937 rng(52);
    const ControlField u = ControlField::zero(zero.spaces.trace, 4, -0.2, 0.2);
    const AdjointTrajectory a0 = solve_adjoint(zero, solve_state(zero, u));
    const ControlField r = random_control(zero, rng);
    // kappa = 0: g = alpha u
    const ControlField g0 = gradient_trace(zero, a0, r);
    for (int n = 1; n <= 4; ++n)
        for (int i = 0; i < zero.spaces.trace->size(); ++i)
            EXPECT_NEAR(g0.vertex_value(n, i), zero.params.alpha * r.vertex_value(n, i), 1e-15);

    // u = 0: g = eta kappa
    const Discretization disc = benchmark(2, 4);
    const AdjointTrajectory a = solve_adjoint(disc, solve_state(disc, u));
    const ControlField g = gradient_trace(disc, a, u);
    for (int n = 1; n <= 4; ++n) {
        const Eigen::VectorXd k = a.temperature_trace(disc, n);
        for (int i = 0; i < k.size(); ++i) EXPECT_NEAR(g.vertex_value(n, i), disc.params.robin_eta * k[i], 1e-15);
    }
}

TEST(Optimize, AdjointGradientMatchesFiniteDifferences)
{
    const Discretization disc = benchmark(2, 8);
    std::mt19937 rng(53);
    for (int trial = 0; trial < 3; ++trial) {
        const ControlField u = random_control(disc, rng, -0.3, 0.3);
        const ControlField v = random_control(disc, rng);
        const auto rows = gradient_check(disc, u, v, {1e-5});
        EXPECT_LE(rows[0].relative_error, 1e-6) << "trial " << trial;
    }
}

TEST(Optimize, FiniteDifferenceErrorIsSecondOrder)
{
    const Discretization disc = benchmark(2, 8);
    std::mt19937 rng(54);
    const ControlField u = random_control(disc, rng, -0.3, 0.3);
    const ControlField v = random_control(disc, rng, -5.0, 5.0);
    const auto rows = gradient_check(disc, u, v, {0.2, 0.1});
    const double ratio = rows[0].relative_error / rows[1].relative_error;
    EXPECT_GT(ratio, 3.0);
    EXPECT_LT(ratio, 5.0);
}

TEST(Optimize, ProjectedAdjointControlRespectsBounds)
{
    const Discretization disc = benchmark(2, 4);
    std::mt19937 rng(55);
    const AdjointTrajectory a = solve_adjoint(disc, solve_state(disc, random_control(disc, rng)));
    const ControlField p = projected_adjoint_control(disc, a);
    for (int n = 1; n <= 4; ++n) {
        const Eigen::VectorXd k = a.temperature_trace(disc, n);
        for (int i = 0; i < k.size(); ++i) {
            const double expected =
                clamp_value(-disc.params.robin_eta / disc.params.alpha * k[i], disc.params.lower, disc.params.upper);
            EXPECT_EQ(p.vertex_value(n, i), expected);
        }
    }
}

TEST(Optimize, ZeroDataConvergesImmediately)
{
    const Discretization disc = discretize(build_unit_square_mesh(2), benchmark_params(), ProblemData{},
                                           TimeGrid::uniform(1.0, 4));
    const OptResult r = projected_gradient(disc, ControlField::zero(disc.spaces.trace, 4, -0.2, 0.2), 1e-6, 10);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_EQ(r.objective, 0.0);
    ASSERT_EQ(r.history.size(), 1u);
    EXPECT_EQ(r.history[0].residual, 0.0);
}

TEST(Optimize, ConvergedIterateSatisfiesProjectionFormula)
{
    const Discretization disc = benchmark(2, 8);
    int observed = 0;
    const OptResult r = projected_gradient(disc, ControlField::zero(disc.spaces.trace, 8, -0.2, 0.2), 1e-8, 200,
                                           [&](const OptIterate&) { ++observed; });
    ASSERT_TRUE(r.converged);
    EXPECT_EQ(observed, r.iterations);
    EXPECT_EQ(static_cast<int>(r.history.size()), r.iterations);
    EXPECT_LE(r.history.back().residual, 1e-8);
    EXPECT_LE(space_time_distance(projected_adjoint_control(disc, r.adjoint), r.control, disc.grid), 1e-8);
    // the stored state and adjoint belong to the returned control
    const StateTrajectory s = solve_state(disc, r.control);
    for (int n = 0; n <= 8; ++n) EXPECT_TRUE(s.temperature[n] == r.state.temperature[n]);
    EXPECT_EQ(objective(disc, s, r.control), r.objective);
    for (int n = 1; n <= 8; ++n) {
        for (int i = 0; i < disc.spaces.trace->size(); ++i) {
            EXPECT_GE(r.control.vertex_value(n, i), disc.params.lower);
            EXPECT_LE(r.control.vertex_value(n, i), disc.params.upper);
        }
    }
}

TEST(Optimize, ReportsNonConvergence)
{
    const Discretization disc = benchmark(2, 4);
    const OptResult r = projected_gradient(disc, ControlField::zero(disc.spaces.trace, 4, -0.2, 0.2), 1e-12, 2);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 2);
    EXPECT_THROW(projected_gradient(disc, ControlField::zero(disc.spaces.trace, 4, -0.2, 0.2), 0.0, 2),
                 std::invalid_argument);
    EXPECT_THROW(projected_gradient(disc, ControlField::zero(disc.spaces.trace, 4, -1.0, 1.0), 1e-6, 2),
                 std::invalid_argument);
}
