#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gmfuse/mixture.hpp"
#include "gmfuse/scenario.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

/// Prior/centralized/decentralized weight comparison, one entry per
/// component.
struct WeightTable {
    Vec prior;
    Vec centralized;
    Vec decentralized;  // agent 0's row; all agents agree at convergence
};

struct ParticleRow {
    double x = 0.0;
    double y = 0.0;
    int component = 0;  // mixture component the draw came from
    int agent = 0;
};

/// Everything one episode produced. Self-contained: embeds the scenario
/// hash and seed so emitted files are traceable.
struct EpisodeReport {
    std::string scenario_hash;
    std::uint64_t seed = 0;
    ScenarioMode mode = ScenarioMode::homogeneous;

    std::vector<GaussianMixture> agent_posteriors;
    std::optional<GaussianMixture> centralized_posterior;  // homogeneous
    std::optional<WeightTable> weights;                    // homogeneous
    Mat association_weights;                               // heterogeneous
    std::vector<double> observations;                      // homogeneous

    int consensus_iterations = 0;
    bool consensus_converged = true;
    std::vector<std::string> warnings;
    std::vector<ParticleRow> particles;
};

/// Runs one fusion episode. Deterministic for a fixed scenario and seed:
/// stream 0 of the seed drives truth propagation, streams 1..S the
/// per-sensor measurement noise, and streams 1000+k the particle cloud of
/// reported mixture k. Consensus non-convergence becomes a warning.
EpisodeReport run_episode(const Scenario& s);

/// Writes weights.csv, mixture.json, report.json and (when particles were
/// requested) particles.csv into out_dir, creating it if needed.
void emit_outputs(const EpisodeReport& r,
                  const std::filesystem::path& out_dir);

}  // namespace gmfuse
