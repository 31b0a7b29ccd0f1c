#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "boussinesq/assembly.hpp"
#include "boussinesq/fem.hpp"
#include "support/bary_oracle.hpp"
#include "support/test_support.hpp"

using namespace boussinesq;

namespace {

double l2_error(const FEField& fh, const ScalarFunction& f)
{
    const Mesh& mesh = fh.space->mesh();
    const QuadratureRule& rule = quadrature_rule(kMaxTriangleDegree);
    double s = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double d = evaluate_scalar(fh, t, rule.points[q]) - f(g.map(rule.points[q]));
            s += rule.weights[q] * g.area * d * d;
        }
    }
    return std::sqrt(s);
}

}  // namespace

TEST(Fem, DofCounts)
{
    for (int level = 0; level <= 4; ++level) {
        const auto mesh = build_unit_square_mesh(level);
        const int nv = mesh->num_vertices(), nt = mesh->num_triangles();
        EXPECT_EQ(FunctionSpace(mesh, SpaceKind::VelocityMini).num_dofs(), 2 * (nv + nt));
        EXPECT_EQ(FunctionSpace(mesh, SpaceKind::PressureP1).num_dofs(), nv);
        EXPECT_EQ(FunctionSpace(mesh, SpaceKind::ScalarP1).num_dofs(), nv);
        const int nb = 4 * (1 << level);
        EXPECT_EQ(static_cast<int>(FunctionSpace(mesh, SpaceKind::VelocityMini).boundary_dofs().size()), 2 * nb);
        EXPECT_EQ(static_cast<int>(FunctionSpace(mesh, SpaceKind::ScalarP1).boundary_dofs().size()), nb);
        EXPECT_EQ(BoundaryTrace(*mesh).size(), nb);
    }
}

TEST(Fem, MiniCellDofLayout)
{
    const auto mesh = build_unit_square_mesh(2);
    const FunctionSpace v(mesh, SpaceKind::VelocityMini);
    const int nv = mesh->num_vertices(), nt = mesh->num_triangles();
    EXPECT_EQ(v.component_stride(), nv + nt);
    for (int t = 0; t < nt; ++t) {
        const auto dofs = v.cell_dofs(t);
        ASSERT_EQ(dofs.size(), 8u);
        for (int c = 0; c < 2; ++c) {
            for (int k = 0; k < 3; ++k) EXPECT_EQ(dofs[4 * c + k], c * (nv + nt) + mesh->triangles[t][k]);
            EXPECT_EQ(dofs[4 * c + 3], c * (nv + nt) + nv + t);
        }
    }
}

TEST(Fem, ShapeValues)
{
    const auto at_barycenter = shape::values({1.0 / 3, 1.0 / 3, 1.0 / 3});
    EXPECT_NEAR(at_barycenter[3], 1.0, 1e-15);
    const auto at_vertex = shape::values({1.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(at_vertex[0], 1.0);
    EXPECT_DOUBLE_EQ(at_vertex[1], 0.0);
    EXPECT_DOUBLE_EQ(at_vertex[3], 0.0);
    for (double s : {0.0, 0.2, 0.5, 0.9}) {
        EXPECT_DOUBLE_EQ(shape::values({s, 1.0 - s, 0.0})[3], 0.0);
        const auto v = shape::values({0.3 * s, 0.5, 0.5 - 0.3 * s});
        EXPECT_NEAR(v[0] + v[1] + v[2], 1.0, 1e-15);
    }
    // int of the bubble over the reference triangle is 27 / 120 * 2 * |K| = 9/40.
    const QuadratureRule& rule = quadrature_rule(kCellDegree);
    double integral = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) integral += 0.5 * rule.weights[q] * shape::values(rule.points[q])[3];
    EXPECT_NEAR(integral, 9.0 / 40.0, 1e-15);
}

TEST(Fem, ShapeGradientsMatchOracle)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = testing_support::random_triangle(rng);
        const auto g = TriangleGeometry::from_points(p[0], p[1], p[2]);
        const oracle::Triangle t(p);
        const Barycentric l{0.2, 0.3, 0.5};
        const auto grads = shape::gradients(l, g);
        for (int k = 0; k < 4; ++k) {
            Eigen::Vector2d expected = Eigen::Vector2d::Zero();
            for (const auto& term : oracle::shape_gradient(k, t)) {
                expected += term.c * std::pow(l[0], term.e[0]) * std::pow(l[1], term.e[1]) * std::pow(l[2], term.e[2]);
            }
            EXPECT_NEAR((grads[k] - expected).norm(), 0.0, 1e-12 * std::max(1.0, expected.norm()));
        }
    }
}

TEST(Fem, EvaluateRejectsBadInput)
{
    const auto mesh = build_unit_square_mesh(1);
    const FEField scalar(build_space(mesh, SpaceKind::ScalarP1));
    const FEField velocity(build_space(mesh, SpaceKind::VelocityMini));
    EXPECT_THROW(evaluate_scalar(scalar, -1, {1, 0, 0}), std::out_of_range);
    EXPECT_THROW(evaluate_scalar(scalar, mesh->num_triangles(), {1, 0, 0}), std::out_of_range);
    EXPECT_THROW(evaluate_velocity(scalar, 0, {1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(evaluate_scalar(velocity, 0, {1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(FEField(scalar.space, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Fem, ProjectionReproducesLinearFunctions)
{
    const auto mesh = build_unit_square_mesh(3);
    const auto p1 = build_space(mesh, SpaceKind::ScalarP1);
    const FEField ones = l2_project(p1, [](const Point&) { return 1.0; });
    EXPECT_NEAR((ones.coefficients - Eigen::VectorXd::Ones(p1->num_dofs())).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    const FEField lin = l2_project(p1, [](const Point& x) { return 2.0 * x.x() - x.y() + 0.5; });
    for (int v = 0; v < mesh->num_vertices(); ++v) {
        const Point& x = mesh->vertices[v];
        EXPECT_NEAR(lin.coefficients[v], 2.0 * x.x() - x.y() + 0.5, 1e-12);
    }
    const auto mini = build_space(mesh, SpaceKind::VelocityMini);
    const FEField vel = l2_project(mini, [](const Point& x) { return Eigen::Vector2d(x.y(), 1.0 - x.x()); });
    for (int t = 0; t < mesh->num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(*mesh, t);
        const Barycentric l{0.1, 0.6, 0.3};
        const Point x = g.map(l);
        EXPECT_NEAR((evaluate_velocity(vel, t, l) - Eigen::Vector2d(x.y(), 1.0 - x.x())).norm(), 0.0, 1e-12);
        EXPECT_NEAR(evaluate_velocity_gradient(vel, t, l)(0, 1), 1.0, 1e-11);
    }
}

TEST(Fem, ProjectionIsIdempotent)
{
    const auto mesh = build_unit_square_mesh(2);
    const auto p1 = build_space(mesh, SpaceKind::ScalarP1);
    const FEField first = l2_project(p1, [](const Point& x) { return std::exp(x.x()) * std::cos(3.0 * x.y()); });
    const FEField second = l2_project(p1, [&](const Point& x) {
        const auto loc = locate_in_unit_square(2, x);
        return evaluate_scalar(first, loc.triangle, loc.barycentric);
    });
    EXPECT_LT((first.coefficients - second.coefficients).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fem, ProjectionErrorDecaysQuadratically)
{
    const ScalarFunction f = [](const Point& x) {
        return std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y());
    };
    std::vector<double> errors;
    for (int level = 2; level <= 5; ++level) {
        errors.push_back(l2_error(l2_project(build_space(build_unit_square_mesh(level), SpaceKind::ScalarP1), f), f));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double rate = std::log2(errors[i - 1] / errors[i]);
        EXPECT_GT(rate, 1.9);
        EXPECT_LT(rate, 2.1);
    }
}

TEST(Fem, TraceRestrictAndExtend)
{
    const auto mesh = build_unit_square_mesh(2);
    const BoundaryTrace trace(*mesh);
    Eigen::VectorXd x(mesh->num_vertices());
    for (int v = 0; v < mesh->num_vertices(); ++v) x[v] = v;
    const Eigen::VectorXd r = trace.restrict(x);
    ASSERT_EQ(r.size(), trace.size());
    for (int i = 0; i < trace.size(); ++i) EXPECT_EQ(r[i], trace.vertices()[i]);
    const Eigen::VectorXd e = trace.extend(r, mesh->num_vertices());
    double length = 0.0;
    for (const auto& edge : trace.edges()) length += edge.length;
    EXPECT_NEAR(length, 4.0, 1e-14);
    for (int v = 0; v < mesh->num_vertices(); ++v) {
        const Point& p = mesh->vertices[v];
        const bool boundary = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
        EXPECT_EQ(e[v], boundary ? v : 0.0);
    }
}
