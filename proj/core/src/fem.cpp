#include "hyrb/fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyrb {

namespace {

struct ElementGeometry {
    double area;
    std::array<double, 3> b;  // d(phi_i)/dx * 2A
    std::array<double, 3> c;  // d(phi_i)/dy * 2A
};

ElementGeometry element_geometry(const TriMesh& mesh, int t) {
    const auto& tr = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tr[0]];
    const Vec2 p1 = mesh.vertices[tr[1]];
    const Vec2 p2 = mesh.vertices[tr[2]];
    ElementGeometry g;
    g.area = 0.5 * cross(p1 - p0, p2 - p0);
    if (!(g.area > 0.0))
        throw std::runtime_error("assembly: degenerate element " + std::to_string(t));
    g.b = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
    g.c = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    return g;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_stiffness(Triplets& out, const TriMesh& mesh, int t, const ElementGeometry& g,
                   double scale = 1.0) {
    const auto& tr = mesh.triangles[t];
    const double f = scale / (4.0 * g.area);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.emplace_back(tr[i], tr[j], f * (g.b[i] * g.b[j] + g.c[i] * g.c[j]));
}

void add_mass(Triplets& out, const TriMesh& mesh, int t, const ElementGeometry& g,
              double scale = 1.0) {
    const auto& tr = mesh.triangles[t];
    const double f = scale * g.area / 12.0;  // exact P1 mass: A/12*(1+delta_ij)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.emplace_back(tr[i], tr[j], f * (i == j ? 2.0 : 1.0));
}

Eigen::SparseMatrix<double> from_triplets(int n, const Triplets& t) {
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

}  // namespace

const Eigen::SparseMatrix<double>& AffineBlocks::block(int q) const {
    switch (q) {
        case 0: return a00;
        case 1: return a01;
        case 2: return a10;
        case 3: return a11;
        default: throw std::invalid_argument("AffineBlocks::block: q must be in 0..3");
    }
}

AffineBlocks assemble_affine(const TriMesh& mesh, const SourceSpec& source) {
    const int n = mesh.num_vertices();
    Triplets stiff[2], mass[2];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const int r = mesh.region[t];
        add_stiffness(stiff[r], mesh, t, g);
        add_mass(mass[r], mesh, t, g);
    }
    AffineBlocks blocks;
    blocks.a00 = from_triplets(n, stiff[0]);
    blocks.a01 = from_triplets(n, mass[0]);
    blocks.a10 = from_triplets(n, stiff[1]);
    blocks.a11 = from_triplets(n, mass[1]);
    blocks.x_gram = blocks.a00 + blocks.a10 + blocks.a01 + blocks.a11;
    blocks.x_gram.makeCompressed();
    blocks.load = assemble_load(mesh, source);
    return blocks;
}

Eigen::VectorXd assemble_boundary_load(const TriMesh& mesh,
                                       const std::function<double(Vec2, Vec2)>& g) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.num_vertices());
    const double gauss = 1.0 / std::sqrt(3.0);
    for (const auto& e : mesh.boundary_edges) {
        const Vec2 pa = mesh.vertices[e[0]];
        const Vec2 pb = mesh.vertices[e[1]];
        const Vec2 d = pb - pa;
        const double len = norm(d);
        if (!(len > 0.0)) throw std::runtime_error("assembly: zero-length boundary edge");
        const Vec2 nrm = (1.0 / len) * Vec2{d.y, -d.x};  // outward for a CCW loop
        for (double t : {-gauss, gauss}) {
            const Vec2 p = 0.5 * ((pa + pb) + t * d);
            const double v = g(p, nrm) * 0.5 * len;  // weight 1 each, jacobian len/2
            f[e[0]] += v * 0.5 * (1.0 - t);
            f[e[1]] += v * 0.5 * (1.0 + t);
        }
    }
    return f;
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const SourceSpec& source) {
    const int snap = nearest_boundary_vertex(mesh, source.center);
    const Vec2 c = mesh.vertices[snap];
    const double amp = source.amplitude;
    const double width = source.width;
    if (!(width > 0.0)) throw std::invalid_argument("source width must be positive");
    return assemble_boundary_load(mesh, [amp, width, c](Vec2 p, Vec2) {
        const Vec2 d = p - c;
        return amp * std::exp(-dot(d, d) / width);
    });
}

Eigen::VectorXd assemble_domain_load(const TriMesh& mesh,
                                     const std::function<double(Vec2)>& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 p0 = mesh.vertices[tr[0]];
        const Vec2 p1 = mesh.vertices[tr[1]];
        const Vec2 p2 = mesh.vertices[tr[2]];
        const double area = 0.5 * cross(p1 - p0, p2 - p0);
        if (!(area > 0.0))
            throw std::runtime_error("assembly: degenerate element " + std::to_string(t));
        // Edge-midpoint rule (degree 2): phi_i is 1/2 on its two midpoints.
        const Vec2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
        const double w = area / 3.0;
        const double f01 = f(m01), f12 = f(m12), f20 = f(m20);
        out[tr[0]] += w * 0.5 * (f01 + f20);
        out[tr[1]] += w * 0.5 * (f01 + f12);
        out[tr[2]] += w * 0.5 * (f12 + f20);
    }
    return out;
}

Eigen::SparseMatrix<double> assemble_direct(const TriMesh& mesh,
                                            const std::function<double(Vec2)>& d_coeff,
                                            const std::function<double(Vec2)>& mu_coeff) {
    Triplets trip;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const auto& tr = mesh.triangles[t];
        const Vec2 c = (1.0 / 3.0) *
                       (mesh.vertices[tr[0]] + mesh.vertices[tr[1]] + mesh.vertices[tr[2]]);
        add_stiffness(trip, mesh, t, g, d_coeff(c));
        add_mass(trip, mesh, t, g, mu_coeff(c));
    }
    return from_triplets(mesh.num_vertices(), trip);
}

Eigen::SparseMatrix<double> combine_blocks(const AffineBlocks& blocks, const Theta& theta) {
    Eigen::SparseMatrix<double> a = theta.d0 * blocks.a00 + theta.mu_a0 * blocks.a01 +
                                    theta.d1 * blocks.a10 + theta.mu_a1 * blocks.a11;
    a.makeCompressed();
    return a;
}

double h1_inner(const AffineBlocks& blocks, const Eigen::VectorXd& u,
                const Eigen::VectorXd& v) {
    if (u.size() != blocks.x_gram.rows() || v.size() != blocks.x_gram.rows())
        throw std::invalid_argument("h1_inner: dimension mismatch");
    return u.dot(blocks.x_gram * v);
}

double h1_norm(const AffineBlocks& blocks, const Eigen::VectorXd& u) {
    return std::sqrt(std::max(h1_inner(blocks, u, u), 0.0));
}

double h1_error_vs_exact(const TriMesh& mesh, const Eigen::VectorXd& coeffs,
                         const std::function<double(Vec2)>& exact,
                         const std::function<Vec2(Vec2)>& exact_grad) {
    if (coeffs.size() != mesh.num_vertices())
        throw std::invalid_argument("h1_error_vs_exact: dimension mismatch");
    // Degree-5 Dunavant rule: centroid + two symmetric orbits.
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
    const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
    const std::array<std::array<double, 3>, 7> bary{{{1 / 3.0, 1 / 3.0, 1 / 3.0},
                                                     {a1, a1, 1.0 - 2.0 * a1},
                                                     {a1, 1.0 - 2.0 * a1, a1},
                                                     {1.0 - 2.0 * a1, a1, a1},
                                                     {a2, a2, 1.0 - 2.0 * a2},
                                                     {a2, 1.0 - 2.0 * a2, a2},
                                                     {1.0 - 2.0 * a2, a2, a2}}};
    const std::array<double, 7> weight{9.0 / 40.0, w1, w1, w1, w2, w2, w2};

    double err2 = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 p0 = mesh.vertices[tr[0]];
        const Vec2 p1 = mesh.vertices[tr[1]];
        const Vec2 p2 = mesh.vertices[tr[2]];
        const double area = 0.5 * cross(p1 - p0, p2 - p0);
        const double u0 = coeffs[tr[0]], u1 = coeffs[tr[1]], u2 = coeffs[tr[2]];
        const double inv2a = 1.0 / (2.0 * area);
        const Vec2 grad_h{(u0 * (p1.y - p2.y) + u1 * (p2.y - p0.y) + u2 * (p0.y - p1.y)) *
                              inv2a,
                          (u0 * (p2.x - p1.x) + u1 * (p0.x - p2.x) + u2 * (p1.x - p0.x)) *
                              inv2a};
        for (int q = 0; q < 7; ++q) {
            const auto& b = bary[q];
            const Vec2 p = b[0] * p0 + b[1] * p1 + b[2] * p2;
            const double uh = b[0] * u0 + b[1] * u1 + b[2] * u2;
            const double dv = uh - exact(p);
            const Vec2 dg = grad_h - exact_grad(p);
            err2 += weight[q] * area * (dv * dv + dot(dg, dg));
        }
    }
    return std::sqrt(std::max(err2, 0.0));
}

TruthSolver::TruthSolver(const AffineBlocks& blocks) : blocks_(&blocks) {
    const int n = blocks.n();
    // Union sparsity pattern of the four blocks with per-block value arrays
    // aligned to it, so A(lambda) assembles in O(nnz) without allocation.
    Triplets trip;
    for (int q = 0; q < 4; ++q) {
        const auto& b = blocks.block(q);
        for (int k = 0; k < b.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(b, k); it; ++it)
                trip.emplace_back(it.row(), it.col(), 1.0);
    }
    pattern_ = from_triplets(n, trip);
    for (int q = 0; q < 4; ++q) {
        auto& vals = aligned_[q];
        vals.assign(pattern_.nonZeros(), 0.0);
        const auto& b = blocks.block(q);
        int idx = 0;
        for (int k = 0; k < pattern_.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(pattern_, k); it; ++it, ++idx)
                vals[idx] = b.coeff(it.row(), it.col());
    }
    llt_.analyzePattern(pattern_);
}

Eigen::SparseMatrix<double> TruthSolver::matrix(const Theta& theta) const {
    Eigen::SparseMatrix<double> a = pattern_;
    const auto th = theta.to_array();
    double* v = a.valuePtr();
    const auto nnz = a.nonZeros();
    for (Eigen::Index k = 0; k < nnz; ++k)
        v[k] = th[0] * aligned_[0][k] + th[1] * aligned_[1][k] + th[2] * aligned_[2][k] +
               th[3] * aligned_[3][k];
    return a;
}

Eigen::VectorXd TruthSolver::solve(const Theta& theta) { return solve(theta, blocks_->load); }

Eigen::VectorXd TruthSolver::solve(const Theta& theta, const Eigen::VectorXd& rhs) {
    if (!(theta.min() > 0.0))
        throw std::runtime_error("truth solve: coefficients must be positive");
    if (rhs.size() != pattern_.rows())
        throw std::invalid_argument("truth solve: right-hand side has wrong dimension");
    const Eigen::SparseMatrix<double> a = matrix(theta);
    llt_.factorize(a);
    if (llt_.info() != Eigen::Success)
        throw std::runtime_error("truth solve: Cholesky factorization failed");
    Eigen::VectorXd x = llt_.solve(rhs);
    x += llt_.solve(rhs - a * x);  // one refinement step
    const double rel = (rhs - a * x).norm() / std::max(rhs.norm(), 1e-300);
    if (!(rel <= 1e-10))
        throw std::runtime_error("truth solve: residual " + std::to_string(rel) +
                                 " exceeds 1e-10");
    return x;
}

RieszSolver::RieszSolver(const AffineBlocks& blocks) {
    llt_.compute(blocks.x_gram);
    if (llt_.info() != Eigen::Success)
        throw std::runtime_error("riesz: H1 Gram matrix is not SPD");
}

Eigen::VectorXd RieszSolver::solve(const Eigen::VectorXd& r) const { return llt_.solve(r); }

double RieszSolver::dual_norm(const Eigen::VectorXd& r) const {
    return std::sqrt(std::max(r.dot(llt_.solve(r)), 0.0));
}

}  // namespace hyrb
