#pragma once

#include <array>
#include <vector>

namespace boussinesq {

// Rule on the reference triangle in barycentric coordinates. Weights sum to 1,
// so the integral over a triangle K is |K| * sum_q w_q f(x_q).
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

// Gauss-Legendre rule on [0, 1] with weights summing to 1.
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;
};

inline constexpr int kMaxTriangleDegree = 20;

// Collapsed (Duffy) tensor Gauss-Legendre rule, exact for all polynomials of
// total degree <= `degree`. Throws std::invalid_argument outside
// [0, kMaxTriangleDegree]. Rules are built once and cached.
const QuadratureRule& quadrature_rule(int degree);

// n-point Gauss-Legendre on [0, 1]; exact up to degree 2n-1.
const LineRule& gauss_legendre(int n);

// Degrees used by the discretization.
inline constexpr int kCellDegree = 8;
inline constexpr int kDataDegree = 14;
inline constexpr int kEdgePoints = 3;

}  // namespace boussinesq
