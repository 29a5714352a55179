#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "hyrb/delaunay.hpp"
#include "hyrb/trimesh.hpp"

using namespace hyrb;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Brute-force empty-circumcircle test: no input point may lie strictly
/// inside any triangle's circumcircle (checked via the determinant predicate
/// with a small symmetric slack).
bool has_empty_circumcircles(const std::vector<Vec2>& pts,
                             const std::vector<std::array<int, 3>>& tris) {
    for (const auto& t : tris) {
        const Vec2 a = pts[static_cast<std::size_t>(t[0])];
        const Vec2 b = pts[static_cast<std::size_t>(t[1])];
        const Vec2 c = pts[static_cast<std::size_t>(t[2])];
        for (std::size_t p = 0; p < pts.size(); ++p) {
            if (static_cast<int>(p) == t[0] || static_cast<int>(p) == t[1] ||
                static_cast<int>(p) == t[2])
                continue;
            const Vec2 d = pts[p];
            const double ax = a.x - d.x, ay = a.y - d.y;
            const double bx = b.x - d.x, by = b.y - d.y;
            const double cx = c.x - d.x, cy = c.y - d.y;
            const double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                               (bx * bx + by * by) * (ax * cy - ay * cx) +
                               (cx * cx + cy * cy) * (ax * by - ay * bx);
            const double orient = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            // det has the sign of "inside" only for CCW triangles
            if ((orient > 0 ? det : -det) > 1e-9) return false;
        }
    }
    return true;
}

double total_area(const TriMesh& mesh) {
    double area = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) area += triangle_area(mesh, t);
    return area;
}

double region_area(const TriMesh& mesh, int label) {
    double area = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t)
        if (mesh.region[static_cast<std::size_t>(t)] == label)
            area += triangle_area(mesh, t);
    return area;
}

}  // namespace

TEST_CASE("delaunay of a square with center point") {
    const std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.4}};
    const auto tris = delaunay_triangulate(pts);
    CHECK(tris.size() == 4);
    CHECK(has_empty_circumcircles(pts, tris));
    double area = 0.0;
    for (const auto& t : tris) {
        const Vec2 a = pts[static_cast<std::size_t>(t[0])];
        const Vec2 b = pts[static_cast<std::size_t>(t[1])];
        const Vec2 c = pts[static_cast<std::size_t>(t[2])];
        area += 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
    }
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("delaunay satisfies the empty-circumcircle property on random input") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 60; ++i) pts.push_back({coord(rng), coord(rng)});
        const auto tris = delaunay_triangulate(pts);
        CHECK(has_empty_circumcircles(pts, tris));
        // Euler: triangles = 2n - 2 - hull_size for a triangulated point set
        CHECK(tris.size() >= pts.size());
    }
}

TEST_CASE("geometry validation rejects inclusions that crowd the boundary") {
    Geometry bad;
    bad.outer_radius = 1.0;
    bad.inclusion_center = {0.0, 0.0};
    bad.inclusion_radius = 0.99;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Geometry overlap;
    overlap.inclusion_center = {-22.0, 0.0};
    overlap.inclusion_radius = 5.0;
    CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

    CHECK_NOTHROW(Geometry{}.validate());
}

TEST_CASE("generated mesh hits the element-count and area targets") {
    const Geometry geom;
    for (int target : {100, 300, 900}) {
        CAPTURE(target);
        const TriMesh mesh = generate_mesh(geom, target, 3);
        validate_mesh(mesh);
        validate_mesh(mesh, geom);
        CHECK(mesh.num_triangles() >= 3 * target / 4);
        CHECK(mesh.num_triangles() <= 5 * target / 4);
        const double disk = kPi * geom.outer_radius * geom.outer_radius;
        CHECK(std::abs(total_area(mesh) - disk) / disk < 0.05);
        const double inc = kPi * geom.inclusion_radius * geom.inclusion_radius;
        CHECK(std::abs(region_area(mesh, 1) - inc) / inc < 0.05);
    }
}

TEST_CASE("generated mesh boundary is a closed circle-shaped loop") {
    const Geometry geom;
    const TriMesh mesh = generate_mesh(geom, 400, 5);
    REQUIRE(mesh.boundary_edges.size() >= 23);
    // every boundary vertex sits on the outer circle
    for (const auto& e : mesh.boundary_edges) {
        const Vec2 p = mesh.vertices[static_cast<std::size_t>(e[0])];
        CHECK(std::abs(norm(p) - geom.outer_radius) / geom.outer_radius < 1e-6);
    }
    // consecutive chaining and closure
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
        const auto& cur = mesh.boundary_edges[i];
        const auto& nxt = mesh.boundary_edges[(i + 1) % mesh.boundary_edges.size()];
        CHECK(cur[1] == nxt[0]);
    }
    // polygon perimeter close to the circle circumference
    double perim = 0.0;
    for (const auto& e : mesh.boundary_edges)
        perim += norm(mesh.vertices[static_cast<std::size_t>(e[1])] -
                      mesh.vertices[static_cast<std::size_t>(e[0])]);
    const double circ = 2.0 * kPi * geom.outer_radius;
    CHECK(std::abs(perim - circ) / circ < 0.02);
}

TEST_CASE("mesh generation is deterministic per seed") {
    const Geometry geom;
    const TriMesh a = generate_mesh(geom, 300, 17);
    const TriMesh b = generate_mesh(geom, 300, 17);
    REQUIRE(a.num_vertices() == b.num_vertices());
    REQUIRE(a.num_triangles() == b.num_triangles());
    for (int v = 0; v < a.num_vertices(); ++v) {
        CHECK(a.vertices[static_cast<std::size_t>(v)].x ==
              b.vertices[static_cast<std::size_t>(v)].x);
        CHECK(a.vertices[static_cast<std::size_t>(v)].y ==
              b.vertices[static_cast<std::size_t>(v)].y);
    }
    CHECK(a.triangles == b.triangles);
    CHECK(a.region == b.region);
    CHECK(a.boundary_edges == b.boundary_edges);
}

TEST_CASE("uniform refinement quadruples elements and preserves area") {
    const Geometry geom;
    const TriMesh mesh = generate_mesh(geom, 200, 9);
    const TriMesh fine = refine_uniform(mesh);
    validate_mesh(fine);
    validate_mesh(fine, geom);
    CHECK(fine.num_triangles() == 4 * mesh.num_triangles());
    CHECK(fine.boundary_edges.size() == 2 * mesh.boundary_edges.size());
    CHECK(total_area(fine) == doctest::Approx(total_area(mesh)).epsilon(1e-12));
    CHECK(region_area(fine, 1) == doctest::Approx(region_area(mesh, 1)).epsilon(1e-12));
    CHECK(max_element_diameter(fine) <= 0.51 * max_element_diameter(mesh));
}

TEST_CASE("nearest boundary vertex snaps toward the requested point") {
    const TriMesh mesh = generate_mesh(Geometry{}, 300, 2);
    const Vec2 probe{-24.5196, -4.8773};
    const int v = nearest_boundary_vertex(mesh, probe);
    std::set<int> boundary;
    for (const auto& e : mesh.boundary_edges) boundary.insert(e[0]);
    REQUIRE(boundary.count(v) == 1);
    const double d = norm(mesh.vertices[static_cast<std::size_t>(v)] - probe);
    for (int w : boundary)
        CHECK(d <= norm(mesh.vertices[static_cast<std::size_t>(w)] - probe) + 1e-12);
}

TEST_CASE("mesh file roundtrip is exact") {
    const TriMesh mesh = generate_mesh(Geometry{}, 150, 8);
    std::stringstream buf;
    write_mesh(buf, mesh);
    const TriMesh back = read_mesh(buf);
    CHECK(back.triangles == mesh.triangles);
    CHECK(back.region == mesh.region);
    CHECK(back.boundary_edges == mesh.boundary_edges);
    REQUIRE(back.num_vertices() == mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        CHECK(back.vertices[static_cast<std::size_t>(v)].x ==
              mesh.vertices[static_cast<std::size_t>(v)].x);
        CHECK(back.vertices[static_cast<std::size_t>(v)].y ==
              mesh.vertices[static_cast<std::size_t>(v)].y);
    }
}

TEST_CASE("mesh parser reports malformed input with line numbers") {
    const auto expect_error = [](const std::string& text, const std::string& fragment) {
        std::stringstream in(text);
        try {
            read_mesh(in);
            FAIL_CHECK("expected parse failure for: " << fragment);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line") != std::string::npos);
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect_error("nonsense 3\n", "vertices");
    expect_error("vertices 3\ntriangles 1\n0 0\n", "vertex");  // truncated list
    expect_error("vertices 3\ntriangles 1\n0 0\n1 0\n0 1\n0 1 5 0\n", "index");
    expect_error("vertices 3\ntriangles 1\n0 0\n1 0\n0 1\n0 1 2 7\n", "region");
    expect_error("vertices 3\ntriangles 1\n0 0 9\n1 0\n0 1\n0 1 2 0\n", "expected 'x y'");
}

TEST_CASE("structural validation catches broken meshes") {
    TriMesh mesh = generate_mesh(Geometry{}, 150, 4);

    SUBCASE("vertex index out of range") {
        mesh.triangles[0][1] = mesh.num_vertices() + 3;
        CHECK_THROWS_AS(validate_mesh(mesh), std::runtime_error);
    }
    SUBCASE("inverted element") {
        std::swap(mesh.triangles[0][0], mesh.triangles[0][1]);
        CHECK_THROWS_AS(validate_mesh(mesh), std::runtime_error);
    }
    SUBCASE("bad region label") {
        mesh.region[0] = 2;
        CHECK_THROWS_AS(validate_mesh(mesh), std::runtime_error);
    }
    SUBCASE("boundary loop mismatch") {
        mesh.boundary_edges.pop_back();
        CHECK_THROWS_AS(validate_mesh(mesh), std::runtime_error);
    }
}
