#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyrb/geometry.hpp"

namespace hyrb {

/// Conforming triangle mesh of the two-region disk domain.  Triangles are
/// CCW-oriented index triples; region is 0 outside the inclusion and 1
/// inside; boundary_edges trace the outer boundary exactly once as a closed
/// CCW loop.
struct TriMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> region;
    std::vector<std::array<int, 2>> boundary_edges;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
};

/// Signed area of triangle t (positive for CCW orientation).
double triangle_area(const TriMesh& mesh, int t);

/// Longest edge length over all triangles.
double max_element_diameter(const TriMesh& mesh);

/// Structural checks: index ranges, positive areas, region labels in {0,1},
/// boundary edges forming a single closed loop that matches the triangles'
/// free edges.  Throws std::runtime_error on the first violation.
void validate_mesh(const TriMesh& mesh);

/// Additional checks against the generating geometry: region labels agree
/// with the inclusion disk and no element straddles the interface by more
/// than its own diameter.
void validate_mesh(const TriMesh& mesh, const Geometry& geom);

/// Unstructured conforming mesh of the geometry with roughly target_elements
/// triangles (guaranteed within +-25%).  Deterministic for fixed arguments.
/// Requires target_elements >= 50.
TriMesh generate_mesh(const Geometry& geom, int target_elements, std::uint64_t seed);

/// Split every triangle into four via edge midpoints.  Halves the element
/// diameter, preserves region labels and the boundary loop ordering.
TriMesh refine_uniform(const TriMesh& mesh);

/// Index of the boundary vertex closest to p (ties -> lowest index).
int nearest_boundary_vertex(const TriMesh& mesh, Vec2 p);

/// Plain-text persistence; write -> read round-trips exactly.
void write_mesh(std::ostream& out, const TriMesh& mesh);
void write_mesh_file(const std::string& path, const TriMesh& mesh);

/// Parses the write_mesh format.  Errors mention the offending line number.
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh_file(const std::string& path);

}  // namespace hyrb
