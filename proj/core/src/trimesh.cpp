#include "hyrb/trimesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hyrb/delaunay.hpp"

namespace hyrb {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform in [0,1), keyed by (seed, tag, payload): stable under reordering.
double hash_u01(std::uint64_t seed, std::uint64_t tag, std::uint64_t payload) {
    const std::uint64_t h = splitmix64(seed ^ splitmix64(tag) ^ splitmix64(payload));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Ring points carry a ~1e-7 relative radial jitter so that no four mesh
/// points are exactly cocircular (that stalls the Delaunay predicates).
std::vector<Vec2> ring_points(Vec2 center, double radius, const std::vector<double>& angles,
                              std::uint64_t seed, std::uint64_t tag) {
    std::vector<Vec2> pts;
    pts.reserve(angles.size());
    for (double a : angles) {
        const double u = hash_u01(seed, tag, std::bit_cast<std::uint64_t>(a));
        const double r = radius * (1.0 + 2.0e-7 * (u - 0.5));
        pts.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return pts;
}

std::vector<double> uniform_angles(int n) {
    std::vector<double> a(n);
    for (int k = 0; k < n; ++k) a[k] = 2.0 * kPi * k / n;
    return a;
}

struct LatticeParams {
    double spacing;
    double outer_clearance;
    double ring_clearance;
};

/// Jittered hexagonal lattice restricted to the disk, kept clear of both
/// circles so ring chords survive as Delaunay edges (empty diametral circles).
std::vector<Vec2> lattice_points(const Geometry& g, const LatticeParams& lp,
                                 std::uint64_t seed) {
    std::vector<Vec2> pts;
    const double s = lp.spacing;
    const double dy = s * std::sqrt(3.0) / 2.0;
    const double R = g.outer_radius;
    const int iy_max = static_cast<int>(std::floor(R / dy));
    const int ix_max = static_cast<int>(std::floor(R / s)) + 1;
    for (int iy = -iy_max; iy <= iy_max; ++iy) {
        const double y = iy * dy;
        const double off = (iy & 1) ? 0.5 * s : 0.0;
        for (int ix = -ix_max; ix <= ix_max; ++ix) {
            const double x = ix * s + off;
            const auto ok = [&](Vec2 p) {
                if (norm(p) > R - lp.outer_clearance) return false;
                const double d = std::abs(norm(p - g.inclusion_center) - g.inclusion_radius);
                return d >= lp.ring_clearance;
            };
            Vec2 p{x, y};
            if (!ok(p)) continue;
            const std::uint64_t key =
                (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
                static_cast<std::uint32_t>(iy);
            Vec2 q{x + 0.24 * s * (hash_u01(seed, 3, key) - 0.5),
                   y + 0.24 * s * (hash_u01(seed, 4, key) - 0.5)};
            pts.push_back(ok(q) ? q : p);
        }
    }
    return pts;
}

using Edge = std::pair<int, int>;

Edge undirected(int a, int b) { return std::minmax(a, b); }

/// Consecutive ring indices missing from the triangulation's edge set.
std::vector<int> missing_segments(const std::set<Edge>& edges, int first, int count) {
    std::vector<int> missing;
    for (int k = 0; k < count; ++k) {
        const int a = first + k;
        const int b = first + (k + 1) % count;
        if (!edges.count(undirected(a, b))) missing.push_back(k);
    }
    return missing;
}

void insert_arc_midpoints(std::vector<double>& angles, const std::vector<int>& segments) {
    std::vector<double> extra;
    const int n = static_cast<int>(angles.size());
    for (int k : segments) {
        const double a0 = angles[k];
        const double a1 = angles[(k + 1) % n];
        double d = a1 - a0;
        if (d <= 0.0) d += 2.0 * kPi;
        extra.push_back(std::fmod(a0 + 0.5 * d, 2.0 * kPi));
    }
    angles.insert(angles.end(), extra.begin(), extra.end());
    std::sort(angles.begin(), angles.end());
}

std::vector<std::array<int, 2>> extract_boundary_loop(
    const std::vector<std::array<int, 3>>& tris) {
    std::map<Edge, std::pair<int, int>> once;  // undirected -> directed as in triangle
    std::map<Edge, int> count;
    for (const auto& t : tris) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e], b = t[(e + 1) % 3];
            once[undirected(a, b)] = {a, b};
            ++count[undirected(a, b)];
        }
    }
    std::map<int, int> next;
    int start = std::numeric_limits<int>::max();
    int n_boundary = 0;
    for (const auto& [key, c] : count) {
        if (c == 1) {
            const auto [a, b] = once[key];
            if (next.count(a))
                throw std::runtime_error("mesh: non-manifold boundary");
            next[a] = b;
            start = std::min(start, a);
            ++n_boundary;
        } else if (c != 2) {
            throw std::runtime_error("mesh: edge shared by more than two triangles");
        }
    }
    if (n_boundary < 3) throw std::runtime_error("mesh: no boundary loop");
    std::vector<std::array<int, 2>> loop;
    loop.reserve(n_boundary);
    int v = start;
    do {
        auto it = next.find(v);
        if (it == next.end()) throw std::runtime_error("mesh: open boundary chain");
        loop.push_back({v, it->second});
        v = it->second;
    } while (v != start && static_cast<int>(loop.size()) <= n_boundary);
    if (v != start || static_cast<int>(loop.size()) != n_boundary)
        throw std::runtime_error("mesh: boundary is not a single closed loop");
    return loop;
}

TriMesh build_candidate(const Geometry& g, double spacing, int target, std::uint64_t seed) {
    int n_out = std::max<int>(23, std::lround(2.0 * kPi * g.outer_radius / spacing));
    int n_in = std::max<int>(23, std::lround(2.0 * kPi * g.inclusion_radius / spacing));
    // For very small targets the 23-gon chord rule alone would overshoot the
    // element budget; trade chord accuracy (down to a 12-gon) for count.
    while (2 * (n_out + n_in) - 2 - n_out > (5 * target) / 4 && (n_out > 12 || n_in > 12)) {
        n_out = std::max(12, (n_out * 17) / 20);
        n_in = std::max(12, (n_in * 17) / 20);
    }

    std::vector<double> outer_angles = uniform_angles(n_out);
    std::vector<double> inner_angles = uniform_angles(n_in);

    for (int round = 0; round < 6; ++round) {
        const double edge_out = 2.0 * g.outer_radius * std::sin(kPi / outer_angles.size());
        const double edge_in = 2.0 * g.inclusion_radius * std::sin(kPi / inner_angles.size());
        LatticeParams lp{spacing, std::max(0.62 * edge_out, 0.35 * spacing),
                         std::max(0.62 * edge_in, 0.45 * spacing)};

        std::vector<Vec2> pts = ring_points({0.0, 0.0}, g.outer_radius, outer_angles, seed, 1);
        const int inner_first = static_cast<int>(pts.size());
        const auto inner = ring_points(g.inclusion_center, g.inclusion_radius, inner_angles,
                                       seed, 2);
        pts.insert(pts.end(), inner.begin(), inner.end());
        const auto lattice = lattice_points(g, lp, seed + round);
        pts.insert(pts.end(), lattice.begin(), lattice.end());

        std::vector<std::array<int, 3>> tris;
        try {
            tris = delaunay_triangulate(pts);
        } catch (const std::runtime_error&) {
            seed = splitmix64(seed);  // re-jitter deterministically
            continue;
        }

        std::set<Edge> edges;
        for (const auto& t : tris)
            for (int e = 0; e < 3; ++e) edges.insert(undirected(t[e], t[(e + 1) % 3]));

        const auto miss_out = missing_segments(edges, 0, static_cast<int>(outer_angles.size()));
        const auto miss_in =
            missing_segments(edges, inner_first, static_cast<int>(inner_angles.size()));
        if (!miss_out.empty() || !miss_in.empty()) {
            insert_arc_midpoints(outer_angles, miss_out);
            insert_arc_midpoints(inner_angles, miss_in);
            continue;
        }

        TriMesh mesh;
        mesh.vertices = std::move(pts);
        mesh.triangles = std::move(tris);
        mesh.region.reserve(mesh.triangles.size());
        for (const auto& t : mesh.triangles) {
            const Vec2 c = (1.0 / 3.0) * (mesh.vertices[t[0]] + mesh.vertices[t[1]] +
                                          mesh.vertices[t[2]]);
            mesh.region.push_back(g.in_inclusion(c) ? 1 : 0);
        }
        mesh.boundary_edges = extract_boundary_loop(mesh.triangles);
        return mesh;
    }
    throw std::runtime_error("generate_mesh: failed to recover a conforming interface");
}

}  // namespace

double triangle_area(const TriMesh& mesh, int t) {
    const auto& tr = mesh.triangles.at(t);
    const Vec2 a = mesh.vertices[tr[0]];
    const Vec2 b = mesh.vertices[tr[1]];
    const Vec2 c = mesh.vertices[tr[2]];
    return 0.5 * cross(b - a, c - a);
}

double max_element_diameter(const TriMesh& mesh) {
    double d2 = 0.0;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const Vec2 diff = mesh.vertices[t[e]] - mesh.vertices[t[(e + 1) % 3]];
            d2 = std::max(d2, dot(diff, diff));
        }
    }
    return std::sqrt(d2);
}

void validate_mesh(const TriMesh& mesh) {
    const int nv = mesh.num_vertices();
    const int nt = mesh.num_triangles();
    if (nv < 3 || nt < 1) throw std::runtime_error("mesh: too few vertices or triangles");
    if (static_cast<int>(mesh.region.size()) != nt)
        throw std::runtime_error("mesh: region array size mismatch");
    for (int t = 0; t < nt; ++t) {
        for (int v : mesh.triangles[t])
            if (v < 0 || v >= nv)
                throw std::runtime_error("mesh: triangle " + std::to_string(t) +
                                         " has vertex index out of range");
        if (!(triangle_area(mesh, t) > 0.0))
            throw std::runtime_error("mesh: triangle " + std::to_string(t) +
                                     " is degenerate or negatively oriented");
        if (mesh.region[t] != 0 && mesh.region[t] != 1)
            throw std::runtime_error("mesh: triangle " + std::to_string(t) +
                                     " has region label outside {0,1}");
    }

    std::map<Edge, int> count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) ++count[undirected(t[e], t[(e + 1) % 3])];
    std::set<Edge> free_edges;
    for (const auto& [key, c] : count) {
        if (c == 1)
            free_edges.insert(key);
        else if (c != 2)
            throw std::runtime_error("mesh: edge shared by more than two triangles");
    }
    const int k = static_cast<int>(mesh.boundary_edges.size());
    if (k != static_cast<int>(free_edges.size()))
        throw std::runtime_error("mesh: boundary edge list does not match free edges");
    for (int i = 0; i < k; ++i) {
        const auto& e = mesh.boundary_edges[i];
        if (e[0] < 0 || e[0] >= nv || e[1] < 0 || e[1] >= nv)
            throw std::runtime_error("mesh: boundary edge index out of range");
        if (!free_edges.count(undirected(e[0], e[1])))
            throw std::runtime_error("mesh: boundary edge not on the boundary");
        if (e[1] != mesh.boundary_edges[(i + 1) % k][0])
            throw std::runtime_error("mesh: boundary edges are not a single closed loop");
    }
}

void validate_mesh(const TriMesh& mesh, const Geometry& geom) {
    validate_mesh(mesh);
    const double tol = 1e-5 * geom.outer_radius;
    for (const Vec2& v : mesh.vertices)
        if (norm(v) > geom.outer_radius + tol)
            throw std::runtime_error("mesh: vertex outside the outer boundary");
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 c = (1.0 / 3.0) *
                       (mesh.vertices[tr[0]] + mesh.vertices[tr[1]] + mesh.vertices[tr[2]]);
        if ((geom.in_inclusion(c) ? 1 : 0) != mesh.region[t])
            throw std::runtime_error("mesh: region label disagrees with inclusion disk");
        double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
        double diam2 = 0.0;
        for (int e = 0; e < 3; ++e) {
            const double d = norm(mesh.vertices[tr[e]] - geom.inclusion_center) -
                             geom.inclusion_radius;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            const Vec2 diff = mesh.vertices[tr[e]] - mesh.vertices[tr[(e + 1) % 3]];
            diam2 = std::max(diam2, dot(diff, diff));
        }
        if (lo < -std::sqrt(diam2) && hi > std::sqrt(diam2))
            throw std::runtime_error("mesh: element straddles the inclusion interface");
    }
}

TriMesh generate_mesh(const Geometry& geom, int target_elements, std::uint64_t seed) {
    geom.validate();
    if (target_elements < 50)
        throw std::invalid_argument("generate_mesh: target_elements must be >= 50");

    const double area = kPi * geom.outer_radius * geom.outer_radius;
    double spacing = std::sqrt(4.0 * (area / target_elements) / std::sqrt(3.0));

    TriMesh best;
    double best_miss = std::numeric_limits<double>::max();
    for (int attempt = 0; attempt < 6; ++attempt) {
        TriMesh m = build_candidate(geom, spacing, target_elements, seed);
        const double miss =
            std::abs(m.num_triangles() - target_elements) / double(target_elements);
        const double ratio = double(m.num_triangles()) / target_elements;
        if (miss < best_miss) {
            best = std::move(m);
            best_miss = miss;
        }
        if (best_miss <= 0.15) break;
        spacing *= std::clamp(std::sqrt(ratio), 0.6, 1.8);
    }
    if (best_miss > 0.25)
        throw std::runtime_error("generate_mesh: element count missed target by more than 25%");
    validate_mesh(best, geom);
    return best;
}

TriMesh refine_uniform(const TriMesh& mesh) {
    TriMesh out;
    out.vertices = mesh.vertices;
    std::map<Edge, int> midpoint;
    const auto mid = [&](int a, int b) {
        const auto key = undirected(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.vertices.size());
        out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
        midpoint.emplace(key, idx);
        return idx;
    };
    out.triangles.reserve(4 * mesh.triangles.size());
    out.region.reserve(4 * mesh.triangles.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const int m01 = mid(tr[0], tr[1]);
        const int m12 = mid(tr[1], tr[2]);
        const int m20 = mid(tr[2], tr[0]);
        out.triangles.push_back({tr[0], m01, m20});
        out.triangles.push_back({tr[1], m12, m01});
        out.triangles.push_back({tr[2], m20, m12});
        out.triangles.push_back({m01, m12, m20});
        for (int i = 0; i < 4; ++i) out.region.push_back(mesh.region[t]);
    }
    out.boundary_edges.reserve(2 * mesh.boundary_edges.size());
    for (const auto& e : mesh.boundary_edges) {
        const int m = mid(e[0], e[1]);
        out.boundary_edges.push_back({e[0], m});
        out.boundary_edges.push_back({m, e[1]});
    }
    return out;
}

int nearest_boundary_vertex(const TriMesh& mesh, Vec2 p) {
    if (mesh.boundary_edges.empty())
        throw std::invalid_argument("nearest_boundary_vertex: mesh has no boundary edges");
    std::set<int> boundary;
    for (const auto& e : mesh.boundary_edges) {
        boundary.insert(e[0]);
        boundary.insert(e[1]);
    }
    int arg = -1;
    double best = std::numeric_limits<double>::max();
    for (int v : boundary) {
        const Vec2 d = mesh.vertices[v] - p;
        const double d2 = dot(d, d);
        if (d2 < best) {
            best = d2;
            arg = v;
        }
    }
    return arg;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
    out << "vertices " << mesh.num_vertices() << "\n";
    out << "triangles " << mesh.num_triangles() << "\n";
    char buf[80];
    for (const Vec2& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
        out << buf;
    }
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        out << tr[0] << ' ' << tr[1] << ' ' << tr[2] << ' ' << mesh.region[t] << "\n";
    }
    for (const auto& e : mesh.boundary_edges) out << e[0] << ' ' << e[1] << "\n";
}

void write_mesh_file(const std::string& path, const TriMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_mesh(out, mesh);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::runtime_error("mesh parse error at line " + std::to_string(line) + ": " + what);
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

struct LineSource {
    std::istream& in;
    int line_no = 0;
    bool next(std::string& s) {
        while (std::getline(in, s)) {
            ++line_no;
            if (!blank(s)) return true;
        }
        return false;
    }
};

}  // namespace

TriMesh read_mesh(std::istream& in) {
    LineSource src{in};
    std::string line;

    const auto expect_header = [&](const char* keyword) -> int {
        if (!src.next(line)) parse_fail(src.line_no + 1, std::string("missing '") + keyword + "' header");
        std::istringstream ss(line);
        std::string word;
        long long n = -1;
        std::string extra;
        if (!(ss >> word >> n) || word != keyword || (ss >> extra))
            parse_fail(src.line_no, std::string("expected '") + keyword + " <count>'");
        if (n < 0 || n > (1LL << 31)) parse_fail(src.line_no, "count out of range");
        return static_cast<int>(n);
    };

    TriMesh mesh;
    const int nv = expect_header("vertices");
    const int nt = expect_header("triangles");
    if (nv < 3) parse_fail(src.line_no, "need at least 3 vertices");
    if (nt < 1) parse_fail(src.line_no, "need at least 1 triangle");

    mesh.vertices.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        if (!src.next(line)) parse_fail(src.line_no + 1, "unexpected end of file in vertex list");
        std::istringstream ss(line);
        Vec2 v;
        std::string extra;
        if (!(ss >> v.x >> v.y) || (ss >> extra)) parse_fail(src.line_no, "expected 'x y'");
        mesh.vertices.push_back(v);
    }

    mesh.triangles.reserve(nt);
    mesh.region.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        if (!src.next(line)) parse_fail(src.line_no + 1, "unexpected end of file in triangle list");
        std::istringstream ss(line);
        std::array<int, 3> tr;
        int region;
        std::string extra;
        if (!(ss >> tr[0] >> tr[1] >> tr[2] >> region) || (ss >> extra))
            parse_fail(src.line_no, "expected 'i j k region'");
        for (int v : tr)
            if (v < 0 || v >= nv) parse_fail(src.line_no, "vertex index out of range");
        if (region != 0 && region != 1) parse_fail(src.line_no, "region label must be 0 or 1");
        mesh.triangles.push_back(tr);
        mesh.region.push_back(region);
    }

    while (src.next(line)) {
        std::istringstream ss(line);
        std::array<int, 2> e;
        std::string extra;
        if (!(ss >> e[0] >> e[1]) || (ss >> extra)) parse_fail(src.line_no, "expected 'i j'");
        for (int v : e)
            if (v < 0 || v >= nv) parse_fail(src.line_no, "boundary vertex index out of range");
        mesh.boundary_edges.push_back(e);
    }
    if (mesh.boundary_edges.size() < 3)
        parse_fail(src.line_no, "too few boundary edges");
    return mesh;
}

TriMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_mesh(in);
}

}  // namespace hyrb
