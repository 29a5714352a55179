#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "hyrb/config.hpp"
#include "hyrb/fem.hpp"
#include "hyrb/reduced_basis.hpp"
#include "hyrb/sampling.hpp"
#include "hyrb/trimesh.hpp"

namespace {

using namespace hyrb;

/// Shared problem state per mesh size, built once and reused across
/// benchmark registrations.
struct Problem {
    TriMesh mesh;
    AffineBlocks blocks;
    CoefficientModel model = CoefficientModel::defaults();
    std::unique_ptr<ReducedBasis> rb;
    std::unique_ptr<TruthSolver> solver;
    std::unique_ptr<RieszSolver> riesz;

    explicit Problem(int target_elements) {
        Geometry geom;
        mesh = generate_mesh(geom, target_elements, 7);
        blocks = assemble_affine(mesh, SourceSpec{});
        solver = std::make_unique<TruthSolver>(blocks);
        riesz = std::make_unique<RieszSolver>(blocks);
        rb = std::make_unique<ReducedBasis>(blocks, model, 800.0);
        for (double lambda : linspace(600.0, 1000.0, 8))
            rb->add_snapshot(*solver, lambda);
    }
};

Problem& problem(int target_elements) {
    static std::map<int, std::unique_ptr<Problem>> cache;
    auto it = cache.find(target_elements);
    if (it == cache.end())
        it = cache.emplace(target_elements, std::make_unique<Problem>(target_elements)).first;
    return *it->second;
}

/// Online reduced solve at fixed basis size N; compare across mesh sizes to
/// see the cost stay independent of the truth dimension.
void bm_online_solve(benchmark::State& state) {
    Problem& p = problem(static_cast<int>(state.range(0)));
    const int n = static_cast<int>(state.range(1));
    ReducedBasis rb(p.blocks, p.model, 800.0);
    for (double lambda : linspace(600.0, 1000.0, n)) rb.add_snapshot(*p.solver, lambda);
    double lambda = 600.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rb.online_solve(lambda));
        lambda += 7.0;
        if (lambda > 1000.0) lambda = 600.0;
    }
}
// N tops out at 8: the one-parameter solution manifold saturates the basis
// (snapshots go linearly dependent) around N = 9 on these meshes.
BENCHMARK(bm_online_solve)
    ->ArgsProduct({{600, 2100}, {2, 5, 8}})
    ->ArgNames({"elems", "N"});

void bm_truth_solve(benchmark::State& state) {
    Problem& p = problem(static_cast<int>(state.range(0)));
    double lambda = 600.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.solver->solve(p.model.theta(lambda)));
        lambda += 7.0;
        if (lambda > 1000.0) lambda = 600.0;
    }
}
BENCHMARK(bm_truth_solve)->Arg(600)->Arg(2100)->ArgName("elems");

void bm_residual_dual_norm(benchmark::State& state) {
    Problem& p = problem(static_cast<int>(state.range(0)));
    double lambda = 600.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.rb->residual_dual_norm(*p.solver, *p.riesz, lambda));
        lambda += 7.0;
        if (lambda > 1000.0) lambda = 600.0;
    }
}
BENCHMARK(bm_residual_dual_norm)->Arg(600)->Arg(2100)->ArgName("elems");

void bm_add_snapshot(benchmark::State& state) {
    Problem& p = problem(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        state.PauseTiming();
        ReducedBasis rb(p.blocks, p.model, 800.0);
        for (double lambda : linspace(600.0, 1000.0, 5)) rb.add_snapshot(*p.solver, lambda);
        state.ResumeTiming();
        rb.add_snapshot(*p.solver, 973.0);
    }
}
BENCHMARK(bm_add_snapshot)->Arg(600)->Arg(2100)->ArgName("elems");

}  // namespace

BENCHMARK_MAIN();
