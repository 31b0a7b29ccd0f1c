#include "boussinesq/fem.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "boussinesq/element.hpp"

namespace boussinesq {

TriangleGeometry TriangleGeometry::from_points(const Point& p0, const Point& p1, const Point& p2)
{
    TriangleGeometry g;
    g.vertices = {p0, p1, p2};
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
    g.area = 0.5 * std::abs(det);
    g.grad_lambda[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    g.grad_lambda[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det;
    g.grad_lambda[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det;
    return g;
}

TriangleGeometry TriangleGeometry::of(const Mesh& mesh, int t)
{
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    return from_points(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
}

namespace shape {

std::array<double, kMini> values(const Barycentric& l)
{
    return {l[0], l[1], l[2], 27.0 * l[0] * l[1] * l[2]};
}

std::array<Eigen::Vector2d, kMini> gradients(const Barycentric& l, const TriangleGeometry& g)
{
    const auto& d = g.grad_lambda;
    return {d[0], d[1], d[2], 27.0 * (l[1] * l[2] * d[0] + l[0] * l[2] * d[1] + l[0] * l[1] * d[2])};
}

}  // namespace shape

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind)
    : mesh_(std::move(mesh)), kind_(kind)
{
    const int nv = mesh_->num_vertices();
    const int nt = mesh_->num_triangles();

    std::vector<int> boundary_vertices;
    for (const auto& e : mesh_->boundary_edges) {
        boundary_vertices.push_back(e.vertices[0]);
        boundary_vertices.push_back(e.vertices[1]);
    }
    std::sort(boundary_vertices.begin(), boundary_vertices.end());
    boundary_vertices.erase(std::unique(boundary_vertices.begin(), boundary_vertices.end()),
                            boundary_vertices.end());

    if (kind_ == SpaceKind::VelocityMini) {
        component_stride_ = nv + nt;
        num_dofs_ = 2 * component_stride_;
        dofs_per_cell_ = 8;
        cell_dofs_.reserve(static_cast<std::size_t>(8 * nt));
        for (int t = 0; t < nt; ++t) {
            const auto& tri = mesh_->triangles[t];
            for (int c = 0; c < 2; ++c) {
                const int offset = c * component_stride_;
                cell_dofs_.insert(cell_dofs_.end(),
                                  {offset + tri[0], offset + tri[1], offset + tri[2], offset + nv + t});
            }
        }
        for (int c = 0; c < 2; ++c) {
            for (int v : boundary_vertices) boundary_dofs_.push_back(c * component_stride_ + v);
        }
    } else {
        component_stride_ = nv;
        num_dofs_ = nv;
        dofs_per_cell_ = 3;
        cell_dofs_.reserve(static_cast<std::size_t>(3 * nt));
        for (const auto& tri : mesh_->triangles) cell_dofs_.insert(cell_dofs_.end(), tri.begin(), tri.end());
        boundary_dofs_ = std::move(boundary_vertices);
    }
}

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, SpaceKind kind)
{
    return std::make_shared<const FunctionSpace>(std::move(mesh), kind);
}

BoundaryTrace::BoundaryTrace(const Mesh& mesh)
{
    for (const auto& e : mesh.boundary_edges) {
        vertices_.push_back(e.vertices[0]);
        vertices_.push_back(e.vertices[1]);
    }
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    for (int v : vertices_) positions_.push_back(mesh.vertices[v]);

    auto local = [this](int v) {
        return static_cast<int>(std::lower_bound(vertices_.begin(), vertices_.end(), v) - vertices_.begin());
    };
    for (const auto& e : mesh.boundary_edges) {
        const double length = (mesh.vertices[e.vertices[1]] - mesh.vertices[e.vertices[0]]).norm();
        edges_.push_back({local(e.vertices[0]), local(e.vertices[1]), length});
    }
}

Eigen::VectorXd BoundaryTrace::restrict(const Eigen::VectorXd& p1) const
{
    Eigen::VectorXd trace(size());
    for (int i = 0; i < size(); ++i) trace[i] = p1[vertices_[i]];
    return trace;
}

Eigen::VectorXd BoundaryTrace::extend(const Eigen::VectorXd& trace, int num_vertices) const
{
    Eigen::VectorXd full = Eigen::VectorXd::Zero(num_vertices);
    for (int i = 0; i < size(); ++i) full[vertices_[i]] = trace[i];
    return full;
}

FEField::FEField(std::shared_ptr<const FunctionSpace> s, Eigen::VectorXd c)
    : space(std::move(s)), coefficients(std::move(c))
{
    if (coefficients.size() != space->num_dofs()) {
        throw std::invalid_argument("FEField: coefficient length does not match the space");
    }
}

FEField::FEField(std::shared_ptr<const FunctionSpace> s)
    : space(std::move(s)), coefficients(Eigen::VectorXd::Zero(space->num_dofs()))
{
}

namespace {

void check_cell(const FEField& field, int t, SpaceKind expected_family)
{
    if (t < 0 || t >= field.space->mesh().num_triangles()) {
        throw std::out_of_range("evaluate: triangle index out of range");
    }
    const bool vector_space = field.space->kind() == SpaceKind::VelocityMini;
    if (vector_space != (expected_family == SpaceKind::VelocityMini)) {
        throw std::invalid_argument("evaluate: field lives in a space of the wrong kind");
    }
}

}  // namespace

double evaluate_scalar(const FEField& field, int t, const Barycentric& lambda)
{
    check_cell(field, t, SpaceKind::ScalarP1);
    const auto dofs = field.space->cell_dofs(t);
    double value = 0.0;
    for (int k = 0; k < 3; ++k) value += lambda[k] * field.coefficients[dofs[k]];
    return value;
}

Eigen::Vector2d evaluate_scalar_gradient(const FEField& field, int t, const Barycentric&)
{
    check_cell(field, t, SpaceKind::ScalarP1);
    const auto g = TriangleGeometry::of(field.space->mesh(), t);
    const auto dofs = field.space->cell_dofs(t);
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) grad += field.coefficients[dofs[k]] * g.grad_lambda[k];
    return grad;
}

Eigen::Vector2d evaluate_velocity(const FEField& field, int t, const Barycentric& lambda)
{
    check_cell(field, t, SpaceKind::VelocityMini);
    const auto dofs = field.space->cell_dofs(t);
    const auto phi = shape::values(lambda);
    Eigen::Vector2d value = Eigen::Vector2d::Zero();
    for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 4; ++k) value[c] += phi[k] * field.coefficients[dofs[4 * c + k]];
    }
    return value;
}

Eigen::Matrix2d evaluate_velocity_gradient(const FEField& field, int t, const Barycentric& lambda)
{
    check_cell(field, t, SpaceKind::VelocityMini);
    const auto g = TriangleGeometry::of(field.space->mesh(), t);
    const auto dofs = field.space->cell_dofs(t);
    const auto dphi = shape::gradients(lambda, g);
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // row c = grad of component c
    for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 4; ++k) grad.row(c) += field.coefficients[dofs[4 * c + k]] * dphi[k].transpose();
    }
    return grad;
}

namespace {

template <class LoadKernel>
FEField project(std::shared_ptr<const FunctionSpace> space, LoadKernel&& load_kernel)
{
    const Mesh& mesh = space->mesh();
    const int ndofs = space->num_dofs();
    const int per_cell = space->dofs_per_cell();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles() * per_cell * per_cell));
    Eigen::VectorXd load = Eigen::VectorXd::Zero(ndofs);

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        const auto dofs = space->cell_dofs(t);
        Eigen::MatrixXd local_mass = per_cell == 8 ? Eigen::MatrixXd(element::velocity_mass(g))
                                                   : Eigen::MatrixXd(element::p1_mass(g));
        const Eigen::VectorXd local_load = load_kernel(g);
        for (int i = 0; i < per_cell; ++i) {
            load[dofs[i]] += local_load[i];
            for (int j = 0; j < per_cell; ++j) triplets.emplace_back(dofs[i], dofs[j], local_mass(i, j));
        }
    }
    Eigen::SparseMatrix<double> mass(ndofs, ndofs);
    mass.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(mass);
    if (solver.info() != Eigen::Success) throw std::runtime_error("l2_project: mass factorization failed");
    return FEField(std::move(space), solver.solve(load));
}

}  // namespace

FEField l2_project(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f)
{
    if (space->kind() == SpaceKind::VelocityMini) {
        throw std::invalid_argument("l2_project: scalar function on a vector space");
    }
    const QuadratureRule& rule = quadrature_rule(kDataDegree);
    return project(std::move(space), [&](const TriangleGeometry& g) {
        Eigen::VectorXd local = Eigen::VectorXd::Zero(3);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * g.area * f(g.map(rule.points[q]));
            for (int k = 0; k < 3; ++k) local[k] += w * rule.points[q][k];
        }
        return local;
    });
}

FEField l2_project(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f)
{
    if (space->kind() != SpaceKind::VelocityMini) {
        throw std::invalid_argument("l2_project: vector function on a scalar space");
    }
    const QuadratureRule& rule = quadrature_rule(kDataDegree);
    return project(std::move(space), [&](const TriangleGeometry& g) {
        Eigen::VectorXd local = Eigen::VectorXd::Zero(8);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::Vector2d value = rule.weights[q] * g.area * f(g.map(rule.points[q]));
            const auto phi = shape::values(rule.points[q]);
            for (int c = 0; c < 2; ++c) {
                for (int k = 0; k < 4; ++k) local[4 * c + k] += value[c] * phi[k];
            }
        }
        return local;
    });
}

}  // namespace boussinesq
