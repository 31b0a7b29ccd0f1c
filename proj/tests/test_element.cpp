#include <random>

#include <gtest/gtest.h>

#include "boussinesq/element.hpp"
#include "support/bary_oracle.hpp"
#include "support/test_support.hpp"

using namespace boussinesq;
using testing_support::relative_difference;

namespace {

constexpr double kTol = 1e-12;

struct Case {
    TriangleGeometry g;
    oracle::Triangle t;
    element::Vec8 w, y;
    element::Vec3 theta, kappa;
};

std::vector<Case> random_cases(int count, unsigned seed)
{
    std::mt19937 rng(seed);
    std::vector<Case> cases;
    for (int i = 0; i < count; ++i) {
        const auto p = testing_support::random_triangle(rng);
        cases.push_back({TriangleGeometry::from_points(p[0], p[1], p[2]), oracle::Triangle(p),
                         testing_support::random_vector(rng, 8), testing_support::random_vector(rng, 8),
                         testing_support::random_vector(rng, 3), testing_support::random_vector(rng, 3)});
    }
    return cases;
}

}  // namespace

TEST(Element, GeometryMatchesOracle)
{
    for (const Case& c : random_cases(20, 1)) {
        EXPECT_NEAR(c.g.area, c.t.area, 1e-15);
        for (int k = 0; k < 3; ++k) EXPECT_LT(relative_difference(c.g.grad_lambda[k], c.t.grad[k]), 1e-13);
    }
}

TEST(Element, LinearMatricesMatchOracle)
{
    for (const Case& c : random_cases(20, 2)) {
        EXPECT_LT(relative_difference(element::p1_mass(c.g), oracle::p1_mass(c.t)), kTol);
        EXPECT_LT(relative_difference(element::p1_stiffness(c.g), oracle::p1_stiffness(c.t)), kTol);
        EXPECT_LT(relative_difference(element::mini_mass(c.g), oracle::mini_mass(c.t)), kTol);
        EXPECT_LT(relative_difference(element::mini_stiffness(c.g), oracle::mini_stiffness(c.t)), kTol);
        EXPECT_LT(relative_difference(element::velocity_mass(c.g), oracle::block_diagonal(oracle::mini_mass(c.t))), kTol);
        EXPECT_LT(relative_difference(element::velocity_stiffness(c.g),
                                      oracle::block_diagonal(oracle::mini_stiffness(c.t))),
                  kTol);
        EXPECT_LT(relative_difference(element::divergence(c.g), oracle::divergence(c.t)), kTol);
        const Eigen::Vector2d gravity(-10.0, 10.0);
        EXPECT_LT(relative_difference(element::buoyancy(c.g, gravity), oracle::buoyancy(c.t, gravity)), kTol);
    }
}

TEST(Element, ConvectionMatchesOracle)
{
    for (const Case& c : random_cases(20, 3)) {
        EXPECT_LT(relative_difference(element::velocity_convection(c.g, c.w), oracle::velocity_convection(c.t, c.w)),
                  kTol);
        EXPECT_LT(relative_difference(element::scalar_convection(c.g, c.w), oracle::scalar_convection(c.t, c.w)),
                  kTol);
    }
}

TEST(Element, TrilinearVectorsMatchOracle)
{
    for (const Case& c : random_cases(20, 4)) {
        EXPECT_LT(relative_difference(element::velocity_first_slot(c.g, c.y, c.w),
                                      oracle::velocity_first_slot(c.t, c.y, c.w)),
                  kTol);
        EXPECT_LT(relative_difference(element::scalar_first_slot(c.g, c.theta, c.kappa),
                                      oracle::scalar_first_slot(c.t, c.theta, c.kappa)),
                  kTol);
        EXPECT_LT(relative_difference(element::velocity_last_slot(c.g, c.w, c.y),
                                      oracle::velocity_last_slot(c.t, c.w, c.y)),
                  kTol);
        EXPECT_LT(relative_difference(element::scalar_last_slot(c.g, c.w, c.theta),
                                      oracle::scalar_last_slot(c.t, c.w, c.theta)),
                  kTol);
    }
}

TEST(Element, EdgeMassMatchesOracle)
{
    for (double length : {0.125, 1.0, 2.5}) {
        EXPECT_LT(relative_difference(element::edge_mass(length), oracle::edge_mass(length)), kTol);
    }
    EXPECT_NEAR(oracle::edge_mass(6.0)(0, 0), 2.0, 1e-15);
    EXPECT_NEAR(oracle::edge_mass(6.0)(0, 1), 1.0, 1e-15);
}

TEST(Element, ClosedFormLinearMatrices)
{
    // Reference right triangle: M = |K|/12 [[2,1,1],[1,2,1],[1,1,2]], K = 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]].
    const auto g = TriangleGeometry::from_points({0, 0}, {1, 0}, {0, 1});
    Eigen::Matrix3d m;
    m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    m *= 0.5 / 12.0;
    Eigen::Matrix3d k;
    k << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    k *= 0.5;
    EXPECT_LT(relative_difference(element::p1_mass(g), m), 1e-14);
    EXPECT_LT(relative_difference(element::p1_stiffness(g), k), 1e-14);
}

TEST(Element, ConvectionIsSkewForAnyVelocity)
{
    for (const Case& c : random_cases(10, 5)) {
        const element::Mat8 n = element::velocity_convection(c.g, c.w);
        const element::Mat3 s = element::scalar_convection(c.g, c.w);
        EXPECT_LT((n + n.transpose()).cwiseAbs().maxCoeff(), 1e-13 * n.cwiseAbs().maxCoeff());
        EXPECT_LT((s + s.transpose()).cwiseAbs().maxCoeff(), 1e-13 * s.cwiseAbs().maxCoeff());
    }
}
