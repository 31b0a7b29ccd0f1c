#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "boussinesq/assembly.hpp"
#include "boussinesq/linsolve.hpp"
#include "support/test_support.hpp"

using namespace boussinesq;
using testing_support::random_vector;

namespace {

// Dense Gaussian elimination with partial pivoting.
Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b)
{
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = k;
        for (Eigen::Index i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        a.row(k).swap(a.row(p));
        std::swap(b[k], b[p]);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a.row(i) -= f * a.row(k);
            b[i] -= f * b[k];
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (Eigen::Index j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

SparseMatrix random_sparse(std::mt19937& rng, int n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> col(0, n - 1);
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 8.0 + u(rng));
        for (int k = 0; k < 4; ++k) t.emplace_back(i, col(rng), u(rng));
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

}  // namespace

TEST(Linsolve, SmallSystems)
{
    SparseMatrix id(3, 3);
    id.setIdentity();
    const Eigen::Vector3d b(1.0, -2.0, 3.0);
    EXPECT_LT((solve_sparse(id, b).solution - b).norm(), 1e-15);
    SparseMatrix d(3, 3);
    d.insert(0, 0) = 2.0;
    d.insert(1, 1) = 4.0;
    d.insert(2, 2) = -0.5;
    EXPECT_LT((solve_sparse(d, b).solution - Eigen::Vector3d(0.5, -0.5, -6.0)).norm(), 1e-15);
    const auto zero = solve_sparse(d, Eigen::Vector3d::Zero());
    EXPECT_EQ(zero.solution, Eigen::Vector3d::Zero());
    EXPECT_EQ(zero.residual, 0.0);
}

TEST(Linsolve, MatchesDenseElimination)
{
    std::mt19937 rng(3);
    DirectSolver solver;
    for (int trial = 0; trial < 3; ++trial) {
        const SparseMatrix a = random_sparse(rng, 50);
        const Eigen::VectorXd b = random_vector(rng, 50);
        const Eigen::VectorXd expected = gauss_solve(Eigen::MatrixXd(a), b);
        const LinearSolution s = solver.solve(a, b);
        EXPECT_LT((s.solution - expected).norm(), 1e-12 * expected.norm());
        EXPECT_LT(s.residual, 1e-12);
    }
}

TEST(Linsolve, SingularMatrixThrows)
{
    SparseMatrix a(2, 2);
    a.insert(0, 0) = 1.0;
    a.insert(0, 1) = 1.0;
    a.insert(1, 0) = 1.0;
    a.insert(1, 1) = 1.0;
    EXPECT_THROW(solve_sparse(a, Eigen::Vector2d(1.0, 0.0)), SolverError);
}

TEST(Linsolve, RepeatedSolvesWithNewValuesOnSamePattern)
{
    std::mt19937 rng(4);
    SparseMatrix a = random_sparse(rng, 30);
    DirectSolver solver;
    const Eigen::VectorXd b = random_vector(rng, 30);
    solver.solve(a, b);
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) it.valueRef() *= 1.0 + 0.1 * (it.col() % 3);
    const Eigen::VectorXd expected = gauss_solve(Eigen::MatrixXd(a), b);
    EXPECT_LT((solver.solve(a, b).solution - expected).norm(), 1e-12 * expected.norm());
}

namespace {

struct StokesFixture {
    std::shared_ptr<const Mesh> mesh = build_unit_square_mesh(2);
    Spaces spaces = Spaces::on(mesh);
    OperatorSet ops = assemble_operator_set(spaces, Eigen::Vector2d::Zero());
    std::shared_ptr<const SaddleBlocks> blocks =
        SaddleBlocks::make(ops.divergence, ops.pressure_mean, spaces.velocity->boundary_dofs());
};

}  // namespace

TEST(Linsolve, SaddleZeroRightHandSide)
{
    const StokesFixture f;
    const SaddleSystem sys{SparseMatrix(0.1 * f.ops.velocity_stiffness), f.blocks};
    const SaddleSolution s = solve_saddle(sys, Eigen::VectorXd::Zero(f.spaces.velocity->num_dofs()));
    EXPECT_EQ(s.velocity.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.pressure.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Linsolve, SaddleRecoversManufacturedSolution)
{
    const StokesFixture f;
    std::mt19937 rng(5);
    const int nu = f.spaces.velocity->num_dofs(), np = f.spaces.pressure->num_dofs();

    // y* = projection of a random field with zero trace onto ker B, computed by
    // dense least squares.
    std::vector<int> free;
    std::vector<bool> fixed(nu, false);
    for (int d : f.spaces.velocity->boundary_dofs()) fixed[d] = true;
    for (int i = 0; i < nu; ++i)
        if (!fixed[i]) free.push_back(i);
    const Eigen::MatrixXd b_full = Eigen::MatrixXd(f.ops.divergence);
    Eigen::MatrixXd b(np, free.size());
    for (std::size_t j = 0; j < free.size(); ++j) b.col(j) = b_full.col(free[j]);
    const Eigen::VectorXd r = random_vector(rng, b.cols());
    const Eigen::VectorXd z = (b * b.transpose()).completeOrthogonalDecomposition().solve(b * r);
    const Eigen::VectorXd y_free = r - b.transpose() * z;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nu);
    for (std::size_t j = 0; j < free.size(); ++j) y[free[j]] = y_free[j];
    ASSERT_LT((b_full * y).cwiseAbs().maxCoeff(), 1e-12);

    Eigen::VectorXd p = random_vector(rng, np);
    p -= Eigen::VectorXd::Constant(np, f.ops.pressure_mean.dot(p) / f.ops.pressure_mean.sum());

    const FEField w(f.spaces.velocity, random_vector(rng, nu));
    const SparseMatrix a = SparseMatrix(16.0 * f.ops.velocity_mass + 0.1 * f.ops.velocity_stiffness) +
                           assemble_convection_velocity(w);
    const Eigen::VectorXd rhs = a * y + b_full.transpose() * p;
    const SaddleSolution s = solve_saddle({a, f.blocks}, rhs);
    EXPECT_LT((s.velocity - y).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((s.pressure - p).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(std::abs(f.ops.pressure_mean.dot(s.pressure)), 1e-12);
    EXPECT_LT((b_full * s.velocity).cwiseAbs().maxCoeff(), 1e-12);
    for (int d : f.spaces.velocity->boundary_dofs()) EXPECT_EQ(s.velocity[d], 0.0);
}

TEST(Linsolve, SaddleRejectsWrongSizes)
{
    const StokesFixture f;
    const SaddleSystem sys{SparseMatrix(f.ops.velocity_stiffness), f.blocks};
    EXPECT_THROW(solve_saddle(sys, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}
