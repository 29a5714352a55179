#pragma once

#include <cmath>
#include <stdexcept>

namespace hyrb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Circular domain centered at the origin with one circular inclusion
/// strictly inside it.  Lengths are in cm.
struct Geometry {
    double outer_radius = 25.0;
    Vec2 inclusion_center{-15.0, -10.0};
    double inclusion_radius = 5.0;

    bool in_inclusion(Vec2 p) const {
        return norm(p - inclusion_center) < inclusion_radius;
    }

    /// Requires positive radii and at least 2% of outer_radius clearance
    /// between the inclusion and the outer boundary.
    void validate() const {
        if (!(outer_radius > 0.0) || !(inclusion_radius > 0.0))
            throw std::invalid_argument("geometry: radii must be positive");
        const double reach = norm(inclusion_center) + inclusion_radius;
        if (reach >= 0.98 * outer_radius)
            throw std::invalid_argument(
                "geometry: inclusion touches outer boundary within tolerance");
    }
};

}  // namespace hyrb
