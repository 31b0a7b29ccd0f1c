#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "boussinesq/mesh.hpp"
#include "boussinesq/quadrature.hpp"

namespace boussinesq {

using Barycentric = std::array<double, 3>;
using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Point&)>;

// Affine map of one triangle: x = sum_k lambda_k p_k.
struct TriangleGeometry {
    std::array<Point, 3> vertices;
    double area = 0.0;
    std::array<Eigen::Vector2d, 3> grad_lambda;

    static TriangleGeometry from_points(const Point& p0, const Point& p1, const Point& p2);
    static TriangleGeometry of(const Mesh& mesh, int t);

    Point map(const Barycentric& lambda) const
    {
        return lambda[0] * vertices[0] + lambda[1] * vertices[1] + lambda[2] * vertices[2];
    }
};

// Scalar Mini shape functions on one triangle: indices 0..2 are the vertex
// hats lambda_k, index 3 is the cubic bubble 27 lambda_0 lambda_1 lambda_2.
namespace shape {
inline constexpr int kMini = 4;
inline constexpr int kP1 = 3;

std::array<double, kMini> values(const Barycentric& lambda);
std::array<Eigen::Vector2d, kMini> gradients(const Barycentric& lambda, const TriangleGeometry& g);
}  // namespace shape

enum class SpaceKind { VelocityMini, PressureP1, ScalarP1 };

// Global numbering. P1 spaces: dof = vertex. Mini: component c of the vertex
// hat at v is c*(nv+nt)+v, of the bubble of triangle t is c*(nv+nt)+nv+t.
// Local cell order for Mini is (c=0: v0 v1 v2 bubble, c=1: v0 v1 v2 bubble).
class FunctionSpace {
public:
    FunctionSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

    const Mesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    SpaceKind kind() const { return kind_; }
    int num_dofs() const { return num_dofs_; }
    int dofs_per_cell() const { return dofs_per_cell_; }
    std::span<const int> cell_dofs(int t) const
    {
        return {cell_dofs_.data() + static_cast<std::size_t>(t) * dofs_per_cell_,
                static_cast<std::size_t>(dofs_per_cell_)};
    }
    // Degrees of freedom attached to vertices on the boundary: the Dirichlet
    // set for velocity, the trace set for scalar spaces. Sorted.
    const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
    int component_stride() const { return component_stride_; }

private:
    std::shared_ptr<const Mesh> mesh_;
    SpaceKind kind_;
    int num_dofs_ = 0;
    int dofs_per_cell_ = 0;
    int component_stride_ = 0;
    std::vector<int> cell_dofs_;
    std::vector<int> boundary_dofs_;
};

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

// Boundary vertices of a mesh and the edges between them, in trace-local
// numbering. Piecewise-linear functions on the boundary are vectors of length
// size().
class BoundaryTrace {
public:
    struct Edge {
        int a, b;  // trace-local endpoints
        double length;
    };

    explicit BoundaryTrace(const Mesh& mesh);

    int size() const { return static_cast<int>(vertices_.size()); }
    const std::vector<int>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Point>& positions() const { return positions_; }

    // Restriction of a P1 coefficient vector to the boundary, and the
    // zero-extension back to the full vertex set.
    Eigen::VectorXd restrict(const Eigen::VectorXd& p1) const;
    Eigen::VectorXd extend(const Eigen::VectorXd& trace, int num_vertices) const;

private:
    std::vector<int> vertices_;
    std::vector<Point> positions_;
    std::vector<Edge> edges_;
};

struct FEField {
    std::shared_ptr<const FunctionSpace> space;
    Eigen::VectorXd coefficients;

    FEField(std::shared_ptr<const FunctionSpace> s, Eigen::VectorXd c);
    explicit FEField(std::shared_ptr<const FunctionSpace> s);
};

// Point values inside triangle t. Throw std::out_of_range for bad indices and
// std::invalid_argument for a space of the wrong kind.
double evaluate_scalar(const FEField& field, int t, const Barycentric& lambda);
Eigen::Vector2d evaluate_velocity(const FEField& field, int t, const Barycentric& lambda);
Eigen::Vector2d evaluate_scalar_gradient(const FEField& field, int t, const Barycentric& lambda);
Eigen::Matrix2d evaluate_velocity_gradient(const FEField& field, int t, const Barycentric& lambda);

// L2 projection: solves M c = (f, phi_i). No boundary conditions are imposed.
FEField l2_project(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f);
FEField l2_project(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f);

}  // namespace boussinesq
