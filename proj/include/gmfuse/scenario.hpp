#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmfuse/dynamics.hpp"
#include "gmfuse/fusion_homogeneous.hpp"
#include "gmfuse/mixture.hpp"
#include "gmfuse/network.hpp"
#include "gmfuse/sensing.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

enum class ScenarioMode { homogeneous, heterogeneous };

/// Declarative description of one fusion episode, loaded from a JSON
/// document. Homogeneous mode needs sensors, a graph, a truth state and
/// one shared prior; heterogeneous mode needs exactly two priors and
/// ignores sensing fields. `warnings` collects non-fatal validation
/// findings (e.g. differing sensor noise despite the homogeneous-sensor
/// assumption) and is not serialized.
struct Scenario {
    ScenarioMode mode = ScenarioMode::homogeneous;
    int state_dim = 0;
    std::uint64_t seed = 0;
    std::optional<LinearDynamics> dynamics;
    std::vector<RangeSensor> sensors;
    std::optional<SensorGraph> graph;
    Vec truth;
    std::vector<GaussianMixture> priors;  // one shared, or one per agent
    ConsensusConfig consensus;
    int emit_particles = 0;
    LinearizationMode linearization = LinearizationMode::ekf;
    std::optional<std::vector<double>> observations;  // pinned measurements
    double prune_threshold = 0.0;
    std::vector<std::string> warnings;
};

/// Parses and validates a scenario file. Throws ParseError on malformed
/// JSON and ValidationError listing every violated rule, not just the
/// first.
Scenario load_scenario(const std::filesystem::path& path);

/// Validates a parsed JSON document (same rules as load_scenario).
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical serialized scenario, as 16 hex
/// digits. Embedded in reports so outputs are traceable to their input.
std::string scenario_hash(const Scenario& s);

}  // namespace gmfuse
