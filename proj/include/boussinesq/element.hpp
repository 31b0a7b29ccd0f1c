#pragma once

#include <Eigen/Core>

#include "boussinesq/fem.hpp"

// Element kernels. Every cell integral uses the degree-8 rule, which is exact
// for all products appearing here on affine triangles. Velocity-local vectors
// are ordered as in FunctionSpace (component-major, then v0 v1 v2 bubble).
namespace boussinesq::element {

using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat38 = Eigen::Matrix<double, 3, 8>;
using Mat83 = Eigen::Matrix<double, 8, 3>;
using Vec3 = Eigen::Vector3d;
using Vec8 = Eigen::Matrix<double, 8, 1>;

Mat3 p1_mass(const TriangleGeometry& g);
Mat3 p1_stiffness(const TriangleGeometry& g);

// Per-component Mini blocks; the velocity matrices are blockdiag(X, X).
Mat4 mini_mass(const TriangleGeometry& g);
Mat4 mini_stiffness(const TriangleGeometry& g);
Mat8 velocity_mass(const TriangleGeometry& g);
Mat8 velocity_stiffness(const TriangleGeometry& g);

// (q, v) -> -int q div v; rows are pressure hats, columns velocity dofs.
Mat38 divergence(const TriangleGeometry& g);

// (theta g, v); rows velocity dofs, columns scalar hats.
Mat83 buoyancy(const TriangleGeometry& g, const Eigen::Vector2d& gravity);

// Skew convection: entry (i, j) = b(w, phi_j, phi_i), assembled from the
// two halves of 1/2 [c(w, phi_j, phi_i) - c(w, phi_i, phi_j)].
Mat8 velocity_convection(const TriangleGeometry& g, const Vec8& w);
Mat3 scalar_convection(const TriangleGeometry& g, const Vec8& w);

// Trilinear forms as vectors over the test function.
Vec8 velocity_first_slot(const TriangleGeometry& g, const Vec8& y, const Vec8& mu);       // b(phi_i, y, mu)
Vec8 scalar_first_slot(const TriangleGeometry& g, const Vec3& theta, const Vec3& kappa);  // b(phi_i, theta, kappa)
Vec8 velocity_last_slot(const TriangleGeometry& g, const Vec8& w, const Vec8& y);         // b(w, y, phi_i)
Vec3 scalar_last_slot(const TriangleGeometry& g, const Vec8& w, const Vec3& theta);       // b(w, theta, psi_i)

// P1 trace mass on a straight edge.
Mat2 edge_mass(double length);

}  // namespace boussinesq::element
