#include "boussinesq/assembly.hpp"

#include <stdexcept>
#include <vector>

#include "boussinesq/element.hpp"

namespace boussinesq {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

template <class Local>
void scatter(Triplets& triplets, std::span<const int> rows, std::span<const int> cols, const Local& local)
{
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            triplets.emplace_back(rows[i], cols[j], local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& triplets)
{
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

element::Vec8 gather8(const Eigen::VectorXd& v, std::span<const int> dofs)
{
    element::Vec8 local;
    for (int k = 0; k < 8; ++k) local[k] = v[dofs[k]];
    return local;
}

element::Vec3 gather3(const Eigen::VectorXd& v, std::span<const int> dofs)
{
    return {v[dofs[0]], v[dofs[1]], v[dofs[2]]};
}

void require(bool condition, const char* message)
{
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Spaces Spaces::on(std::shared_ptr<const Mesh> mesh)
{
    Spaces s;
    s.mesh = mesh;
    s.velocity = build_space(mesh, SpaceKind::VelocityMini);
    s.pressure = build_space(mesh, SpaceKind::PressureP1);
    s.scalar = build_space(mesh, SpaceKind::ScalarP1);
    s.trace = std::make_shared<const BoundaryTrace>(*mesh);
    return s;
}

OperatorSet assemble_operator_set(const Spaces& spaces, const Eigen::Vector2d& gravity)
{
    const Mesh& mesh = *spaces.mesh;
    const FunctionSpace& vel = *spaces.velocity;
    const FunctionSpace& pre = *spaces.pressure;
    const FunctionSpace& sca = *spaces.scalar;
    const std::size_t nt = static_cast<std::size_t>(mesh.num_triangles());

    Triplets vm, vk, div, sm, sk, buoy;
    vm.reserve(nt * 32);
    vk.reserve(nt * 32);
    div.reserve(nt * 24);
    sm.reserve(nt * 9);
    sk.reserve(nt * 9);
    buoy.reserve(nt * 24);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(pre.num_dofs());

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        const auto vd = vel.cell_dofs(t);
        const auto pd = pre.cell_dofs(t);
        const auto sd = sca.cell_dofs(t);

        const element::Mat4 mass = element::mini_mass(g);
        const element::Mat4 stiff = element::mini_stiffness(g);
        for (int c = 0; c < 2; ++c) {
            const auto block = vd.subspan(static_cast<std::size_t>(4 * c), 4);
            scatter(vm, block, block, mass);
            scatter(vk, block, block, stiff);
        }
        scatter(div, pd, vd, element::divergence(g));
        const element::Mat3 p1m = element::p1_mass(g);
        scatter(sm, sd, sd, p1m);
        scatter(sk, sd, sd, element::p1_stiffness(g));
        scatter(buoy, vd, sd, element::buoyancy(g, gravity));
        for (int k = 0; k < 3; ++k) mean[pd[k]] += g.area / 3.0;
    }

    Triplets bm;
    const BoundaryTrace& trace = *spaces.trace;
    for (const auto& e : trace.edges()) {
        const element::Mat2 local = element::edge_mass(e.length);
        const int rows[2] = {trace.vertices()[e.a], trace.vertices()[e.b]};
        scatter(bm, std::span<const int>(rows, 2), std::span<const int>(rows, 2), local);
    }

    OperatorSet ops;
    ops.velocity_mass = from_triplets(vel.num_dofs(), vel.num_dofs(), vm);
    ops.velocity_stiffness = from_triplets(vel.num_dofs(), vel.num_dofs(), vk);
    ops.divergence = from_triplets(pre.num_dofs(), vel.num_dofs(), div);
    ops.scalar_mass = from_triplets(sca.num_dofs(), sca.num_dofs(), sm);
    ops.scalar_stiffness = from_triplets(sca.num_dofs(), sca.num_dofs(), sk);
    ops.boundary_mass = from_triplets(sca.num_dofs(), sca.num_dofs(), bm);
    ops.buoyancy = from_triplets(vel.num_dofs(), sca.num_dofs(), buoy);
    ops.pressure_mean = std::move(mean);
    return ops;
}

SparseMatrix assemble_convection_velocity(const FEField& w)
{
    const FunctionSpace& vel = *w.space;
    require(vel.kind() == SpaceKind::VelocityMini, "assemble_convection_velocity: w must be a Mini field");
    const Mesh& mesh = vel.mesh();
    Triplets triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 32);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        const auto vd = vel.cell_dofs(t);
        const element::Mat8 local = element::velocity_convection(g, gather8(w.coefficients, vd));
        for (int c = 0; c < 2; ++c) {
            const auto block = vd.subspan(static_cast<std::size_t>(4 * c), 4);
            scatter(triplets, block, block, local.block<4, 4>(4 * c, 4 * c));
        }
    }
    return from_triplets(vel.num_dofs(), vel.num_dofs(), triplets);
}

SparseMatrix assemble_convection_scalar(const FEField& w, const FunctionSpace& scalar)
{
    const FunctionSpace& vel = *w.space;
    require(vel.kind() == SpaceKind::VelocityMini, "assemble_convection_scalar: w must be a Mini field");
    require(scalar.kind() != SpaceKind::VelocityMini, "assemble_convection_scalar: scalar space expected");
    require(vel.mesh_ptr() == scalar.mesh_ptr(), "assemble_convection_scalar: spaces on different meshes");
    const Mesh& mesh = vel.mesh();
    Triplets triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        const auto sd = scalar.cell_dofs(t);
        scatter(triplets, sd, sd, element::scalar_convection(g, gather8(w.coefficients, vel.cell_dofs(t))));
    }
    return from_triplets(scalar.num_dofs(), scalar.num_dofs(), triplets);
}

Eigen::VectorXd assemble_trilinear_vector(TrilinearForm form, const FEField& f1, const FEField& f2,
                                          const FunctionSpace* velocity_test)
{
    const bool v1 = f1.space->kind() == SpaceKind::VelocityMini;
    const bool v2 = f2.space->kind() == SpaceKind::VelocityMini;
    require(f1.space->mesh_ptr() == f2.space->mesh_ptr(), "assemble_trilinear_vector: fields on different meshes");
    const Mesh& mesh = f1.space->mesh();

    switch (form) {
    case TrilinearForm::VelocityFirstSlot:
    case TrilinearForm::VelocityLastSlot: {
        require(v1 && v2, "assemble_trilinear_vector: velocity fields expected");
        const FunctionSpace& vel = *f1.space;
        Eigen::VectorXd out = Eigen::VectorXd::Zero(vel.num_dofs());
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const auto g = TriangleGeometry::of(mesh, t);
            const auto vd = vel.cell_dofs(t);
            const auto a = gather8(f1.coefficients, vd);
            const auto b = gather8(f2.coefficients, f2.space->cell_dofs(t));
            const element::Vec8 local = form == TrilinearForm::VelocityFirstSlot
                                            ? element::velocity_first_slot(g, a, b)
                                            : element::velocity_last_slot(g, a, b);
            for (int k = 0; k < 8; ++k) out[vd[k]] += local[k];
        }
        return out;
    }
    case TrilinearForm::ScalarFirstSlot: {
        require(!v1 && !v2, "assemble_trilinear_vector: scalar fields expected");
        require(velocity_test != nullptr && velocity_test->kind() == SpaceKind::VelocityMini &&
                    velocity_test->mesh_ptr() == f1.space->mesh_ptr(),
                "assemble_trilinear_vector: a Mini test space on the same mesh is required");
        Eigen::VectorXd out = Eigen::VectorXd::Zero(velocity_test->num_dofs());
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const auto g = TriangleGeometry::of(mesh, t);
            const auto vd = velocity_test->cell_dofs(t);
            const element::Vec8 local = element::scalar_first_slot(
                g, gather3(f1.coefficients, f1.space->cell_dofs(t)), gather3(f2.coefficients, f2.space->cell_dofs(t)));
            for (int k = 0; k < 8; ++k) out[vd[k]] += local[k];
        }
        return out;
    }
    case TrilinearForm::ScalarLastSlot: {
        require(v1 && !v2, "assemble_trilinear_vector: velocity then scalar field expected");
        const FunctionSpace& sca = *f2.space;
        Eigen::VectorXd out = Eigen::VectorXd::Zero(sca.num_dofs());
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const auto g = TriangleGeometry::of(mesh, t);
            const auto sd = sca.cell_dofs(t);
            const element::Vec3 local = element::scalar_last_slot(
                g, gather8(f1.coefficients, f1.space->cell_dofs(t)), gather3(f2.coefficients, sd));
            for (int k = 0; k < 3; ++k) out[sd[k]] += local[k];
        }
        return out;
    }
    }
    throw std::invalid_argument("assemble_trilinear_vector: unknown form");
}

Eigen::VectorXd assemble_load(const FunctionSpace& space, const std::function<double(const Point&)>& f)
{
    require(space.kind() != SpaceKind::VelocityMini, "assemble_load: scalar space expected");
    const QuadratureRule& rule = quadrature_rule(kDataDegree);
    const Mesh& mesh = space.mesh();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        const auto sd = space.cell_dofs(t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * g.area * f(g.map(rule.points[q]));
            for (int k = 0; k < 3; ++k) out[sd[k]] += w * rule.points[q][k];
        }
    }
    return out;
}

Eigen::VectorXd assemble_load(const FunctionSpace& space, const std::function<Eigen::Vector2d(const Point&)>& f)
{
    require(space.kind() == SpaceKind::VelocityMini, "assemble_load: Mini space expected");
    const QuadratureRule& rule = quadrature_rule(kDataDegree);
    const Mesh& mesh = space.mesh();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        const auto vd = space.cell_dofs(t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::Vector2d value = rule.weights[q] * g.area * f(g.map(rule.points[q]));
            const auto phi = shape::values(rule.points[q]);
            for (int c = 0; c < 2; ++c) {
                for (int k = 0; k < 4; ++k) out[vd[4 * c + k]] += value[c] * phi[k];
            }
        }
    }
    return out;
}

double integrate_squared(const Mesh& mesh, const std::function<double(const Point&)>& f)
{
    const QuadratureRule& rule = quadrature_rule(kDataDegree);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double v = f(g.map(rule.points[q]));
            sum += rule.weights[q] * g.area * v * v;
        }
    }
    return sum;
}

double integrate_squared(const Mesh& mesh, const std::function<Eigen::Vector2d(const Point&)>& f)
{
    const QuadratureRule& rule = quadrature_rule(kDataDegree);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto g = TriangleGeometry::of(mesh, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            sum += rule.weights[q] * g.area * f(g.map(rule.points[q])).squaredNorm();
        }
    }
    return sum;
}

}  // namespace boussinesq
