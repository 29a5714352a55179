#pragma once

#include <memory>

#include "hyrb/fem.hpp"
#include "hyrb/optics.hpp"
#include "hyrb/trimesh.hpp"

namespace hyrb::testutil {

/// Small assembled problem reused across test cases in one binary.
struct TestProblem {
    TriMesh mesh;
    AffineBlocks blocks;
    CoefficientModel model = CoefficientModel::defaults();

    explicit TestProblem(int target_elements, std::uint64_t seed = 11) {
        mesh = generate_mesh(Geometry{}, target_elements, seed);
        blocks = assemble_affine(mesh, SourceSpec{});
    }
};

inline const TestProblem& small_problem() {
    static const TestProblem p(250);
    return p;
}

/// Hand-built single reference triangle (0,0)-(1,0)-(0,1), region 0.
inline TriMesh unit_triangle() {
    TriMesh mesh;
    mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    mesh.triangles = {{0, 1, 2}};
    mesh.region = {0};
    mesh.boundary_edges = {{0, 1}, {1, 2}, {2, 0}};
    return mesh;
}

}  // namespace hyrb::testutil
