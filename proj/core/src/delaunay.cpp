#include "hyrb/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace hyrb {

namespace {

/// > 0 when d lies strictly inside the circumcircle of CCW triangle (a,b,c).
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
           ad * (bdx * cdy - bdy * cdx);
}

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw std::invalid_argument("delaunay: need at least 3 points");

    double lo_x = points[0].x, hi_x = lo_x, lo_y = points[0].y, hi_y = lo_y;
    for (const Vec2& p : points) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double cx = 0.5 * (lo_x + hi_x);
    const double cy = 0.5 * (lo_y + hi_y);
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});

    std::vector<Vec2> pts = points;
    pts.push_back({cx - 30.0 * span, cy - 15.0 * span});
    pts.push_back({cx + 30.0 * span, cy - 15.0 * span});
    pts.push_back({cx, cy + 30.0 * span});

    std::vector<std::array<int, 3>> tris{{n, n + 1, n + 2}};
    std::vector<char> alive{1};

    std::vector<int> bad;
    for (int p = 0; p < n; ++p) {
        bad.clear();
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            if (!alive[t]) continue;
            const auto& tr = tris[t];
            if (incircle(pts[tr[0]], pts[tr[1]], pts[tr[2]], pts[p]) > 0.0)
                bad.push_back(t);
        }
        if (bad.empty())
            throw std::runtime_error("delaunay: point outside every circumcircle");

        // Cavity boundary: directed edges of bad triangles whose undirected
        // form occurs exactly once.
        std::map<std::pair<int, int>, std::pair<int, int>> edges;
        for (int t : bad) {
            const auto& tr = tris[t];
            for (int e = 0; e < 3; ++e) {
                const int a = tr[e], b = tr[(e + 1) % 3];
                const auto key = std::minmax(a, b);
                auto it = edges.find(key);
                if (it == edges.end())
                    edges.emplace(key, std::make_pair(a, b));
                else
                    it->second = {-1, -1};  // interior edge, shared twice
            }
        }
        for (int t : bad) alive[t] = 0;
        for (const auto& [key, dir] : edges) {
            if (dir.first < 0) continue;
            if (orient(pts[dir.first], pts[dir.second], pts[p]) <= 0.0)
                throw std::runtime_error("delaunay: degenerate cavity (cocircular input?)");
            tris.push_back({dir.first, dir.second, p});
            alive.push_back(1);
        }

        // Compact occasionally to keep the scan cheap.
        if (tris.size() > 64 && std::count(alive.begin(), alive.end(), char(1)) * 2 <
                                    static_cast<long>(tris.size())) {
            std::vector<std::array<int, 3>> keep;
            keep.reserve(tris.size() / 2);
            for (int t = 0; t < static_cast<int>(tris.size()); ++t)
                if (alive[t]) keep.push_back(tris[t]);
            tris = std::move(keep);
            alive.assign(tris.size(), 1);
        }
    }

    std::vector<std::array<int, 3>> out;
    out.reserve(tris.size());
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
        if (!alive[t]) continue;
        const auto& tr = tris[t];
        if (tr[0] >= n || tr[1] >= n || tr[2] >= n) continue;
        out.push_back(tr);
    }
    return out;
}

}  // namespace hyrb
