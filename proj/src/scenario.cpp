#include "gmfuse/scenario.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include "gmfuse/errors.hpp"

namespace gmfuse {

namespace {

using nlohmann::json;

Vec json_to_vec(const json& j) {
    if (!j.is_array()) {
        throw ParseError("expected an array of numbers");
    }
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Mat json_to_mat(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ParseError("expected an array of row arrays");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) {
            throw ParseError("ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j[r][c].get<double>();
        }
    }
    return m;
}

json vec_to_json(const Vec& v) {
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        j.push_back(v[i]);
    }
    return j;
}

json mat_to_json(const Mat& m) {
    json j = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        j.push_back(std::move(row));
    }
    return j;
}

std::optional<GaussianMixture> parse_mixture(const json& j, int state_dim,
                                             const std::string& name,
                                             std::vector<std::string>& errors) {
    const std::size_t before = errors.size();
    std::vector<WeightedGaussian> comps;
    if (!j.is_object() || !j.contains("components") ||
        !j["components"].is_array() || j["components"].empty()) {
        errors.push_back(name + ": must contain a non-empty 'components' array");
        return std::nullopt;
    }
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < j["components"].size(); ++i) {
        const std::string ctx = name + ".components[" + std::to_string(i) + "]";
        const auto& cj = j["components"][i];
        try {
            const double w = cj.at("weight").get<double>();
            Vec mean = json_to_vec(cj.at("mean"));
            Mat cov = json_to_mat(cj.at("cov"));
            if (mean.size() != state_dim) {
                errors.push_back(ctx + ": mean length " +
                                 std::to_string(mean.size()) +
                                 " does not match state_dim " +
                                 std::to_string(state_dim));
                continue;
            }
            weight_sum += w;
            comps.push_back({w, Gaussian(std::move(mean), std::move(cov))});
        } catch (const json::exception& e) {
            errors.push_back(ctx + ": " + e.what());
        } catch (const Error& e) {
            errors.push_back(ctx + ": " + e.what());
        }
    }
    if (errors.size() != before) {
        return std::nullopt;
    }
    try {
        return GaussianMixture(std::move(comps));
    } catch (const Error& e) {
        errors.push_back(name + ": " + e.what());
        return std::nullopt;
    }
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

namespace {

Scenario scenario_from_json_impl(const json& j) {
    std::vector<std::string> errors;
    Scenario s;

    if (!j.is_object()) {
        throw ValidationError("scenario must be a JSON object");
    }

    // mode
    bool mode_valid = true;
    const std::string mode_str = j.value("mode", std::string());
    if (mode_str == "homogeneous") {
        s.mode = ScenarioMode::homogeneous;
    } else if (mode_str == "heterogeneous") {
        s.mode = ScenarioMode::heterogeneous;
    } else {
        mode_valid = false;
        errors.push_back("mode: must be 'homogeneous' or 'heterogeneous'");
    }

    // scalars
    s.state_dim = j.value("state_dim", 0);
    if (s.state_dim < 1) {
        errors.push_back("state_dim: must be a positive integer");
    }
    s.seed = j.value("seed", std::uint64_t{0});
    s.emit_particles = j.value("emit_particles", 0);
    if (s.emit_particles < 0) {
        errors.push_back("emit_particles: must be >= 0");
    }
    if (j.contains("consensus")) {
        s.consensus.tol = j["consensus"].value("tol", 1e-10);
        s.consensus.max_iters = j["consensus"].value("max_iters", 10000);
        if (!(s.consensus.tol > 0.0)) {
            errors.push_back("consensus.tol: must be > 0");
        }
        if (s.consensus.max_iters < 1) {
            errors.push_back("consensus.max_iters: must be >= 1");
        }
    }
    const std::string lin = j.value("linearization", std::string("ekf"));
    if (lin == "ekf") {
        s.linearization = LinearizationMode::ekf;
    } else if (lin == "literal") {
        s.linearization = LinearizationMode::literal;
    } else {
        errors.push_back("linearization: must be 'ekf' or 'literal'");
    }
    s.prune_threshold = j.value("prune_threshold", 0.0);
    if (s.prune_threshold < 0.0 || s.prune_threshold >= 1.0) {
        errors.push_back("prune_threshold: must lie in [0, 1)");
    }

    // dynamics
    if (j.contains("dynamics")) {
        try {
            Mat F = json_to_mat(j["dynamics"].at("F"));
            Mat Q = json_to_mat(j["dynamics"].at("Q"));
            if (s.state_dim >= 1 && F.rows() != s.state_dim) {
                errors.push_back("dynamics.F: dimension does not match state_dim");
            } else {
                s.dynamics.emplace(std::move(F), std::move(Q));
            }
        } catch (const json::exception& e) {
            errors.push_back(std::string("dynamics: ") + e.what());
        } catch (const Error& e) {
            errors.push_back(std::string("dynamics: ") + e.what());
        }
    }

    // sensors
    if (j.contains("sensors")) {
        for (std::size_t i = 0; i < j["sensors"].size(); ++i) {
            const std::string ctx = "sensors[" + std::to_string(i) + "]";
            try {
                const auto& sj = j["sensors"][i];
                Vec pos = json_to_vec(sj.at("position"));
                const double r = sj.at("noise_var").get<double>();
                if (s.state_dim >= 1 && pos.size() > s.state_dim) {
                    errors.push_back(ctx + ": position has more entries than state_dim");
                    continue;
                }
                s.sensors.emplace_back(std::move(pos), r);
            } catch (const json::exception& e) {
                errors.push_back(ctx + ": " + e.what());
            } catch (const Error& e) {
                errors.push_back(ctx + ": " + e.what());
            }
        }
        if (s.sensors.size() >= 2) {
            for (std::size_t i = 1; i < s.sensors.size(); ++i) {
                if (s.sensors[i].position_dim() != s.sensors[0].position_dim()) {
                    errors.push_back("sensors: all positions must share one dimension");
                    break;
                }
            }
            for (std::size_t i = 1; i < s.sensors.size(); ++i) {
                if (s.sensors[i].noise_var() != s.sensors[0].noise_var()) {
                    s.warnings.push_back(
                        "sensors have differing noise variances; the network "
                        "model assumes homogeneous sensors");
                    break;
                }
            }
        }
    }

    // graph (node count comes from the sensor list)
    if (j.contains("graph")) {
        try {
            std::vector<std::pair<int, int>> edges;
            for (const auto& e : j["graph"].value("edges", json::array())) {
                edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            }
            if (!s.sensors.empty()) {
                s.graph.emplace(static_cast<int>(s.sensors.size()),
                                std::move(edges));
            }
        } catch (const json::exception& e) {
            errors.push_back(std::string("graph: ") + e.what());
        } catch (const Error& e) {
            errors.push_back(std::string("graph: ") + e.what());
        }
    }

    // truth
    if (j.contains("truth")) {
        try {
            s.truth = json_to_vec(j["truth"]);
            if (s.state_dim >= 1 && s.truth.size() != s.state_dim) {
                errors.push_back("truth: length does not match state_dim");
            }
        } catch (const json::exception& e) {
            errors.push_back(std::string("truth: ") + e.what());
        } catch (const Error& e) {
            errors.push_back(std::string("truth: ") + e.what());
        }
    }

    // priors
    if (j.contains("prior") && j.contains("priors")) {
        errors.push_back("give either 'prior' or 'priors', not both");
    }
    if (j.contains("prior")) {
        if (auto m = parse_mixture(j["prior"], s.state_dim, "prior", errors)) {
            s.priors.push_back(std::move(*m));
        }
    }
    if (j.contains("priors")) {
        if (!j["priors"].is_array()) {
            errors.push_back("priors: must be an array of mixtures");
        } else {
            for (std::size_t i = 0; i < j["priors"].size(); ++i) {
                if (auto m = parse_mixture(j["priors"][i], s.state_dim,
                                           "priors[" + std::to_string(i) + "]",
                                           errors)) {
                    s.priors.push_back(std::move(*m));
                }
            }
        }
    }

    // observations
    if (j.contains("observations")) {
        try {
            s.observations = j["observations"].get<std::vector<double>>();
        } catch (const json::exception& e) {
            errors.push_back(std::string("observations: ") + e.what());
        }
    }

    // mode-specific rules; keyed on field presence so one bad field does
    // not suppress the report of a missing one
    if (mode_valid && s.mode == ScenarioMode::homogeneous) {
        if (!j.contains("prior")) {
            errors.push_back(
                "homogeneous mode requires exactly one shared prior "
                "(field 'prior')");
        }
        if (!j.contains("sensors") || j["sensors"].empty()) {
            errors.push_back("homogeneous mode requires a non-empty sensor list");
        }
        if (!j.contains("graph")) {
            errors.push_back("homogeneous mode requires a graph");
        }
        if (!j.contains("truth")) {
            errors.push_back("homogeneous mode requires a truth state");
        }
        if (s.observations && !s.sensors.empty() &&
            s.observations->size() != s.sensors.size()) {
            errors.push_back("observations: one pinned measurement per sensor required");
        }
    }
    if (mode_valid && s.mode == ScenarioMode::heterogeneous) {
        if (j.contains("prior") || (j.contains("priors") && j["priors"].is_array() &&
                                    j["priors"].size() != 2)) {
            errors.push_back(
                "heterogeneous mode requires exactly two priors (field 'priors')");
        } else if (!j.contains("priors")) {
            errors.push_back("heterogeneous mode requires the 'priors' field");
        }
        if (j.contains("sensors") || j.contains("graph") || j.contains("truth") ||
            j.contains("observations")) {
            s.warnings.push_back(
                "heterogeneous fusion uses priors only; sensing fields are ignored");
        }
    }

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "scenario validation failed:";
        for (const auto& e : errors) {
            msg << "\n  - " << e;
        }
        throw ValidationError(msg.str());
    }
    return s;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    try {
        return scenario_from_json_impl(j);
    } catch (const json::exception& e) {
        // a field with the wrong JSON type that slipped past per-field checks
        throw ValidationError(std::string("scenario field error: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("cannot parse " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["mode"] = s.mode == ScenarioMode::homogeneous ? "homogeneous"
                                                    : "heterogeneous";
    j["state_dim"] = s.state_dim;
    j["seed"] = s.seed;
    j["consensus"] = {{"tol", s.consensus.tol},
                      {"max_iters", s.consensus.max_iters}};
    j["emit_particles"] = s.emit_particles;
    j["linearization"] =
        s.linearization == LinearizationMode::ekf ? "ekf" : "literal";
    if (s.dynamics) {
        j["dynamics"] = {{"F", mat_to_json(s.dynamics->F())},
                         {"Q", mat_to_json(s.dynamics->Q())}};
    }

    auto mixture_json = [](const GaussianMixture& m) {
        json mj;
        mj["components"] = json::array();
        for (const auto& wc : m.components()) {
            mj["components"].push_back({{"weight", wc.weight},
                                        {"mean", vec_to_json(wc.component.mean())},
                                        {"cov", mat_to_json(wc.component.cov())}});
        }
        return mj;
    };

    if (s.mode == ScenarioMode::homogeneous) {
        j["truth"] = vec_to_json(s.truth);
        j["sensors"] = json::array();
        for (const auto& sensor : s.sensors) {
            j["sensors"].push_back({{"position", vec_to_json(sensor.position())},
                                    {"noise_var", sensor.noise_var()}});
        }
        json edges = json::array();
        if (s.graph) {
            for (auto [a, b] : s.graph->edges()) {
                edges.push_back(json::array({a, b}));
            }
        }
        j["graph"] = {{"edges", std::move(edges)}};
        j["prior"] = mixture_json(s.priors.front());
        if (s.observations) {
            j["observations"] = *s.observations;
        }
    } else {
        j["priors"] = json::array();
        for (const auto& m : s.priors) {
            j["priors"].push_back(mixture_json(m));
        }
        j["prune_threshold"] = s.prune_threshold;
    }
    return j;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write scenario file: " + path.string());
    }
    out << scenario_to_json(s).dump(2) << "\n";
}

std::string scenario_hash(const Scenario& s) {
    const std::uint64_t h = fnv1a64(scenario_to_json(s).dump());
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

}  // namespace gmfuse
