#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyrb/config.hpp"
#include "hyrb/experiment.hpp"
#include "hyrb/trimesh.hpp"

namespace {

// Exit codes: 0 success, 1 configuration error, 2 invariant/check violation,
// 3 runtime failure.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInvariantError = 2;
constexpr int kRuntimeError = 3;

struct CommonArgs {
    std::string config_path;
    std::string output_dir;
    std::vector<std::string> algorithms;
    std::vector<int> sizes;
    std::int64_t seed = -1;
    int threads = -1;
};

hyrb::ExperimentConfig load_config(const CommonArgs& args) {
    hyrb::ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = hyrb::parse_config_file(args.config_path);
    hyrb::ConfigOverrides overrides;
    if (!args.output_dir.empty()) overrides.output_dir = args.output_dir;
    if (!args.algorithms.empty()) overrides.algorithms = args.algorithms;
    if (!args.sizes.empty()) overrides.sizes = args.sizes;
    if (args.seed >= 0) overrides.seed = static_cast<std::uint64_t>(args.seed);
    if (args.threads >= 0) overrides.threads = args.threads;
    hyrb::apply_overrides(cfg, overrides);
    return cfg;
}

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "Config file (section.key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", args.output_dir, "Output directory");
    cmd->add_option("--algorithms", args.algorithms,
                    "Subset of greedy, gradient, metropolis, log_spacing")
        ->delimiter(',');
    cmd->add_option("--sizes", args.sizes, "Basis sizes to run")->delimiter(',');
    cmd->add_option("--seed", args.seed, "Base seed (per-trial seeds are seed + trial)");
    cmd->add_option("--threads", args.threads, "Worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduced-basis wavelength selection study for diffuse optical tomography"};
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App* run_cmd = app.add_subcommand("run", "Run the selection experiment");
    add_common_flags(run_cmd, args);

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Run the model/mesh/solver self-checks");
    add_common_flags(validate_cmd, args);

    CLI::App* mesh_cmd = app.add_subcommand("mesh", "Generate a mesh and write it to a file");
    add_common_flags(mesh_cmd, args);
    std::string mesh_out = "mesh.txt";
    int mesh_target = -1;
    mesh_cmd->add_option("--mesh-out", mesh_out, "Mesh output path");
    mesh_cmd->add_option("--target", mesh_target, "Target element count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        hyrb::ExperimentConfig cfg = load_config(args);

        if (run_cmd->parsed()) {
            hyrb::run_experiment(cfg, std::cout);
            return kOk;
        }
        if (validate_cmd->parsed()) {
            const auto checks = hyrb::validate_suite(cfg, std::cout);
            bool ok = true;
            for (const auto& c : checks) ok = ok && c.status != hyrb::CheckStatus::fail;
            if (!ok) {
                std::cerr << "validation failed\n";
                return kInvariantError;
            }
            std::cout << "all checks passed\n";
            return kOk;
        }
        if (mesh_cmd->parsed()) {
            if (mesh_target > 0) cfg.mesh_target_elements = mesh_target;
            cfg.validate();
            const hyrb::TriMesh mesh =
                hyrb::generate_mesh(cfg.geometry, cfg.mesh_target_elements, cfg.mesh_seed);
            hyrb::validate_mesh(mesh, cfg.geometry);
            hyrb::write_mesh_file(mesh_out, mesh);
            std::cout << "wrote " << mesh.num_triangles() << " elements, "
                      << mesh.num_vertices() << " vertices to " << mesh_out << "\n";
            return kOk;
        }
        std::cerr << "no subcommand selected\n";
        return kConfigError;
    } catch (const hyrb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const hyrb::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariantError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}
