#pragma once

#include <array>
#include <vector>

#include "hyrb/geometry.hpp"

namespace hyrb {

/// Delaunay triangulation of a planar point set (incremental Bowyer-Watson).
/// Returns CCW-oriented index triples into `points`.  Throws
/// std::runtime_error if the in-circle predicate degenerates (exactly
/// cocircular inputs); callers are expected to jitter synthetic point sets.
std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2>& points);

}  // namespace hyrb
