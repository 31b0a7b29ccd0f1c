#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace boussinesq {

using Point = Eigen::Vector2d;

struct BoundaryEdge {
    std::array<int, 2> vertices;  // oriented with the domain on the left
    int triangle;
};

// Conforming triangulation of the unit square. Triangles are counter-clockwise.
struct Mesh {
    std::vector<Point> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    int level = 0;

    // Set by refine_uniform: the coarse mesh and, per triangle, the coarse
    // triangle it was cut from.
    std::shared_ptr<const Mesh> parent;
    std::vector<int> parent_triangle;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }

    // Signed area; positive for every triangle of a valid mesh.
    double area(int t) const;
    double diameter() const { return 1.0 / static_cast<double>(1 << level); }
};

// Level L has 2^L cells per side, each split along the lower-left to
// upper-right diagonal. Vertex j*(n+1)+i sits at (i/n, j/n).
std::shared_ptr<const Mesh> build_unit_square_mesh(int level);

// Red refinement: every triangle is cut into four by its edge midpoints.
std::shared_ptr<const Mesh> refine_uniform(const std::shared_ptr<const Mesh>& mesh);

double boundary_arc_length(const Mesh& mesh);

struct TrianglePoint {
    int triangle;
    std::array<double, 3> barycentric;
};

// Locates a point of the closed unit square in a mesh built by
// build_unit_square_mesh(level). Points on shared edges resolve to the
// lower-index cell.
TrianglePoint locate_in_unit_square(int level, const Point& p);

// Plain-text listing: header line with counts, then one vertex per line,
// then one triangle per line.
void write_mesh_listing(const Mesh& mesh, std::ostream& out);

}  // namespace boussinesq
