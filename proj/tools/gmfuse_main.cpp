#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gmfuse/episode.hpp"
#include "gmfuse/errors.hpp"
#include "gmfuse/scenario.hpp"

namespace {

int run_command(const std::string& scenario_path, const std::string& out_dir,
                const CLI::App& run, std::uint64_t seed, double tol,
                int max_iters, int emit_particles,
                const std::string& mode_override) {
    gmfuse::Scenario scenario = gmfuse::load_scenario(scenario_path);
    if (run.count("--seed") > 0) scenario.seed = seed;
    if (run.count("--tol") > 0) scenario.consensus.tol = tol;
    if (run.count("--max-iters") > 0) scenario.consensus.max_iters = max_iters;
    if (run.count("--emit-particles") > 0) scenario.emit_particles = emit_particles;
    if (!mode_override.empty()) {
        if (mode_override == "ekf") {
            scenario.linearization = gmfuse::LinearizationMode::ekf;
        } else if (mode_override == "literal") {
            scenario.linearization = gmfuse::LinearizationMode::literal;
        } else {
            throw gmfuse::ValidationError(
                "--mode-override must be 'ekf' or 'literal'");
        }
    }

    const gmfuse::EpisodeReport report = gmfuse::run_episode(scenario);
    gmfuse::emit_outputs(report, out_dir);

    std::cout << "scenario " << report.scenario_hash << " seed " << report.seed
              << "\n";
    if (report.mode == gmfuse::ScenarioMode::homogeneous) {
        const auto& w = *report.weights;
        std::cout << "consensus: " << report.consensus_iterations
                  << " iterations, "
                  << (report.consensus_converged ? "converged" : "NOT converged")
                  << "\n";
        std::cout << "component  prior      centralized  decentralized\n";
        for (Eigen::Index i = 0; i < w.prior.size(); ++i) {
            std::printf("%-9ld  %-9.4f  %-11.4f  %-9.4f\n", i + 1, w.prior[i],
                        w.centralized[i], w.decentralized[i]);
        }
    } else {
        std::cout << "association weights (rows i1, columns j2):\n";
        for (Eigen::Index i = 0; i < report.association_weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < report.association_weights.cols();
                 ++j) {
                std::printf("  %.4f", report.association_weights(i, j));
            }
            std::printf("\n");
        }
    }
    for (const auto& warning : report.warnings) {
        std::cout << "warning: " << warning << "\n";
    }
    std::cout << "outputs written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized Gaussian-mixture sensor fusion simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one fusion episode");
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tol = 0.0;
    int max_iters = 0;
    int emit_particles = 0;
    std::string mode_override;
    run->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--tol", tol, "Override the consensus tolerance");
    run->add_option("--max-iters", max_iters,
                    "Override the consensus iteration cap");
    run->add_option("--emit-particles", emit_particles,
                    "Override the per-mixture particle count");
    run->add_option("--mode-override", mode_override,
                    "Override the linearization mode (ekf|literal)");

    CLI11_PARSE(app, argc, argv);

    try {
        return run_command(scenario_path, out_dir, *run, seed, tol, max_iters,
                           emit_particles, mode_override);
    } catch (const gmfuse::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gmfuse::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gmfuse::DegenerateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
