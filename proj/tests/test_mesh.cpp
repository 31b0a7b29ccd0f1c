#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "boussinesq/mesh.hpp"

using namespace boussinesq;

namespace {

std::set<std::pair<long, long>> scaled_vertex_set(const Mesh& mesh, int scale)
{
    std::set<std::pair<long, long>> s;
    for (const Point& p : mesh.vertices) s.insert({std::lround(p.x() * scale), std::lround(p.y() * scale)});
    return s;
}

}  // namespace

TEST(Mesh, CountsPerLevel)
{
    for (int level = 0; level <= 6; ++level) {
        const auto mesh = build_unit_square_mesh(level);
        const int n = 1 << level;
        EXPECT_EQ(mesh->num_vertices(), (n + 1) * (n + 1));
        EXPECT_EQ(mesh->num_triangles(), 2 * n * n);
        EXPECT_EQ(static_cast<int>(mesh->boundary_edges.size()), 4 * n);
        EXPECT_DOUBLE_EQ(mesh->diameter(), 1.0 / n);
    }
}

TEST(Mesh, AreasArePositiveAndSumToOne)
{
    for (int level = 0; level <= 5; ++level) {
        const auto mesh = build_unit_square_mesh(level);
        double total = 0.0;
        for (int t = 0; t < mesh->num_triangles(); ++t) {
            EXPECT_GT(mesh->area(t), 0.0);
            total += mesh->area(t);
        }
        EXPECT_NEAR(total, 1.0, 1e-14);
    }
}

TEST(Mesh, BoundaryEdgesLieOnTheBoundaryWithInteriorToTheLeft)
{
    const auto mesh = build_unit_square_mesh(3);
    auto on_boundary = [](const Point& p) {
        return p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
    };
    for (const BoundaryEdge& e : mesh->boundary_edges) {
        const Point& a = mesh->vertices[e.vertices[0]];
        const Point& b = mesh->vertices[e.vertices[1]];
        EXPECT_TRUE(on_boundary(a) && on_boundary(b));
        const Point mid = 0.5 * (a + b);
        const Eigen::Vector2d left(-(b - a).y(), (b - a).x());
        const Point inside = mid + 1e-3 * left;
        EXPECT_TRUE(inside.x() > 0.0 && inside.x() < 1.0 && inside.y() > 0.0 && inside.y() < 1.0);
        const auto& tri = mesh->triangles[e.triangle];
        EXPECT_NE(std::find(tri.begin(), tri.end(), e.vertices[0]), tri.end());
        EXPECT_NE(std::find(tri.begin(), tri.end(), e.vertices[1]), tri.end());
    }
    EXPECT_NEAR(boundary_arc_length(*mesh), 4.0, 1e-14);
}

TEST(Mesh, EveryInteriorEdgeIsSharedByExactlyTwoTriangles)
{
    const auto mesh = build_unit_square_mesh(4);
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : mesh->triangles) {
        for (int k = 0; k < 3; ++k) ++count[std::minmax(t[k], t[(k + 1) % 3])];
    }
    int boundary = 0;
    for (const auto& [edge, c] : count) {
        EXPECT_TRUE(c == 1 || c == 2);
        boundary += c == 1;
    }
    EXPECT_EQ(boundary, static_cast<int>(mesh->boundary_edges.size()));
}

TEST(Mesh, RefinementMatchesDirectConstruction)
{
    auto mesh = build_unit_square_mesh(1);
    for (int level = 2; level <= 4; ++level) {
        mesh = refine_uniform(mesh);
        const auto direct = build_unit_square_mesh(level);
        EXPECT_EQ(mesh->level, level);
        EXPECT_EQ(mesh->num_triangles(), direct->num_triangles());
        EXPECT_EQ(mesh->boundary_edges.size(), direct->boundary_edges.size());
        EXPECT_EQ(scaled_vertex_set(*mesh, 1 << level), scaled_vertex_set(*direct, 1 << level));
        double total = 0.0;
        for (int t = 0; t < mesh->num_triangles(); ++t) {
            EXPECT_GT(mesh->area(t), 0.0);
            total += mesh->area(t);
        }
        EXPECT_NEAR(total, 1.0, 1e-14);
    }
}

TEST(Mesh, ChildrenLieInsideTheirParent)
{
    const auto coarse = build_unit_square_mesh(2);
    const auto fine = refine_uniform(coarse);
    ASSERT_EQ(fine->parent_triangle.size(), fine->triangles.size());
    for (int t = 0; t < fine->num_triangles(); ++t) {
        const int p = fine->parent_triangle[t];
        EXPECT_NEAR(fine->area(t), 0.25 * coarse->area(p), 1e-15);
        Point centroid = Point::Zero();
        for (int v : fine->triangles[t]) centroid += fine->vertices[v] / 3.0;
        const auto loc = locate_in_unit_square(2, centroid);
        EXPECT_EQ(loc.triangle, p);
    }
}

TEST(Mesh, LocateReturnsConsistentBarycentricCoordinates)
{
    const int level = 3;
    const auto mesh = build_unit_square_mesh(level);
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.999, 1.0}) {
        for (double y : {0.0, 0.05, 0.5, 0.73, 1.0}) {
            const Point p(x, y);
            const auto loc = locate_in_unit_square(level, p);
            ASSERT_GE(loc.triangle, 0);
            ASSERT_LT(loc.triangle, mesh->num_triangles());
            Point q = Point::Zero();
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) {
                EXPECT_GE(loc.barycentric[k], -1e-14);
                q += loc.barycentric[k] * mesh->vertices[mesh->triangles[loc.triangle][k]];
                sum += loc.barycentric[k];
            }
            EXPECT_NEAR(sum, 1.0, 1e-14);
            EXPECT_NEAR((q - p).norm(), 0.0, 1e-14);
        }
    }
}

TEST(Mesh, ListingHasHeaderAndOneLinePerEntity)
{
    const auto mesh = build_unit_square_mesh(1);
    std::ostringstream out;
    write_mesh_listing(*mesh, out);
    std::istringstream in(out.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 2 + mesh->num_vertices() + mesh->num_triangles());
}

TEST(Mesh, NegativeLevelThrows)
{
    EXPECT_THROW(build_unit_square_mesh(-1), std::invalid_argument);
}
