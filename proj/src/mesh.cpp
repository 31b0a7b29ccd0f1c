#include "boussinesq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace boussinesq {

double Mesh::area(int t) const
{
    const auto& tri = triangles[static_cast<std::size_t>(t)];
    const Point& a = vertices[tri[0]];
    const Point& b = vertices[tri[1]];
    const Point& c = vertices[tri[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::shared_ptr<const Mesh> build_unit_square_mesh(int level)
{
    if (level < 0 || level > 12) {
        throw std::invalid_argument("build_unit_square_mesh: level must lie in [0, 12]");
    }
    auto mesh = std::make_shared<Mesh>();
    mesh->level = level;
    const int n = 1 << level;
    const double h = 1.0 / n;
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };

    mesh->vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh->vertices.emplace_back(i * h, j * h);
        }
    }

    // Cell (i, j) owns triangles 2*(j*n+i) (lower) and 2*(j*n+i)+1 (upper).
    mesh->triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh->triangles.push_back({v00, v10, v11});
            mesh->triangles.push_back({v00, v11, v01});
        }
    }

    auto lower = [n](int i, int j) { return 2 * (j * n + i); };
    auto upper = [n](int i, int j) { return 2 * (j * n + i) + 1; };
    auto& edges = mesh->boundary_edges;
    edges.reserve(static_cast<std::size_t>(4 * n));
    for (int i = 0; i < n; ++i) edges.push_back({{vid(i, 0), vid(i + 1, 0)}, lower(i, 0)});
    for (int j = 0; j < n; ++j) edges.push_back({{vid(n, j), vid(n, j + 1)}, lower(n - 1, j)});
    for (int i = n; i > 0; --i) edges.push_back({{vid(i, n), vid(i - 1, n)}, upper(i - 1, n - 1)});
    for (int j = n; j > 0; --j) edges.push_back({{vid(0, j), vid(0, j - 1)}, upper(0, j - 1)});
    return mesh;
}

std::shared_ptr<const Mesh> refine_uniform(const std::shared_ptr<const Mesh>& coarse)
{
    auto fine = std::make_shared<Mesh>();
    fine->level = coarse->level + 1;
    fine->parent = coarse;
    fine->vertices = coarse->vertices;

    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto [it, inserted] = midpoint.try_emplace(key, fine->num_vertices());
        if (inserted) {
            fine->vertices.push_back(0.5 * (coarse->vertices[a] + coarse->vertices[b]));
        }
        return it->second;
    };

    fine->triangles.reserve(4 * coarse->triangles.size());
    fine->parent_triangle.reserve(4 * coarse->triangles.size());
    for (int t = 0; t < coarse->num_triangles(); ++t) {
        const auto [a, b, c] = coarse->triangles[t];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        for (const auto& child : {std::array{a, ab, ca}, std::array{ab, b, bc},
                                  std::array{ca, bc, c}, std::array{ab, bc, ca}}) {
            fine->triangles.push_back(child);
            fine->parent_triangle.push_back(t);
        }
    }

    // Child k of parent t sits at 4t+k; the boundary edge a->b of t is covered
    // by the children containing a and b respectively.
    for (const auto& e : coarse->boundary_edges) {
        const auto& tri = coarse->triangles[e.triangle];
        const int m = mid(e.vertices[0], e.vertices[1]);
        auto child_with = [&](int v) {
            const int k = static_cast<int>(std::find(tri.begin(), tri.end(), v) - tri.begin());
            return 4 * e.triangle + k;
        };
        fine->boundary_edges.push_back({{e.vertices[0], m}, child_with(e.vertices[0])});
        fine->boundary_edges.push_back({{m, e.vertices[1]}, child_with(e.vertices[1])});
    }
    return fine;
}

double boundary_arc_length(const Mesh& mesh)
{
    double length = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        length += (mesh.vertices[e.vertices[1]] - mesh.vertices[e.vertices[0]]).norm();
    }
    return length;
}

TrianglePoint locate_in_unit_square(int level, const Point& p)
{
    const int n = 1 << level;
    const double sx = p.x() * n, sy = p.y() * n;
    const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, n - 1);
    const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, n - 1);
    const double u = sx - i, v = sy - j;
    const int cell = 2 * (j * n + i);
    // lower triangle (v00, v10, v11): lambda = (1-u, u-v, v)
    if (u >= v) return {cell, {1.0 - u, u - v, v}};
    // upper triangle (v00, v11, v01): lambda = (1-v, u, v-u)
    return {cell + 1, {1.0 - v, u, v - u}};
}

void write_mesh_listing(const Mesh& mesh, std::ostream& out)
{
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << " 0\n";
    out.precision(17);
    for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << " 0\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace boussinesq
