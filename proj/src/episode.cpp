#include "gmfuse/episode.hpp"

#include <cstdio>
#include <fstream>

#include "gmfuse/dynamics.hpp"
#include "gmfuse/errors.hpp"
#include "gmfuse/fusion_heterogeneous.hpp"
#include "gmfuse/fusion_homogeneous.hpp"
#include "gmfuse/oracle.hpp"
#include "gmfuse/rng.hpp"

namespace gmfuse {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTruthStream = 0;
constexpr std::uint64_t kSensorStreamBase = 1;
constexpr std::uint64_t kParticleStreamBase = 1000;

void sample_particles(EpisodeReport& report, int count) {
    if (count <= 0) {
        return;
    }
    for (std::size_t agent = 0; agent < report.agent_posteriors.size();
         ++agent) {
        const auto samples = sample_mixture_labeled(
            report.agent_posteriors[agent], count,
            Rng::derive(report.seed, kParticleStreamBase + agent));
        for (int k = 0; k < count; ++k) {
            const Vec& p = samples.points[static_cast<std::size_t>(k)];
            report.particles.push_back(
                {p[0], p.size() > 1 ? p[1] : 0.0,
                 samples.component[static_cast<std::size_t>(k)],
                 static_cast<int>(agent)});
        }
    }
}

EpisodeReport run_homogeneous(const Scenario& s) {
    EpisodeReport report;
    report.seed = s.seed;
    report.mode = s.mode;
    report.warnings = s.warnings;

    Vec truth = s.truth;
    GaussianMixture prior = s.priors.front();
    if (s.dynamics) {
        truth = propagate_truth(truth, *s.dynamics,
                                Rng::derive(s.seed, kTruthStream));
        std::vector<WeightedGaussian> predicted;
        predicted.reserve(prior.components().size());
        for (const auto& wc : prior.components()) {
            predicted.push_back(
                {wc.weight, predict_gaussian(wc.component, *s.dynamics)});
        }
        prior = GaussianMixture(std::move(predicted));
    }

    if (s.observations) {
        report.observations = *s.observations;
    } else {
        report.observations.reserve(s.sensors.size());
        for (std::size_t i = 0; i < s.sensors.size(); ++i) {
            report.observations.push_back(
                measure_range(truth, s.sensors[i],
                              Rng::derive(s.seed, kSensorStreamBase + i)));
        }
    }

    const CentralizedResult central = fuse_centralized(
        prior, report.observations, s.sensors, s.linearization);
    const HomogeneousFusionResult decentralized =
        fuse_homogeneous(*s.graph, prior, report.observations, s.sensors,
                         s.consensus, s.linearization);

    report.centralized_posterior = central.posterior;
    report.agent_posteriors = decentralized.agent_posteriors;
    report.consensus_iterations = decentralized.consensus_iterations;
    report.consensus_converged = decentralized.consensus_converged;
    if (!decentralized.consensus_converged) {
        report.warnings.push_back(
            "consensus did not converge within " +
            std::to_string(s.consensus.max_iters) + " iterations");
    }

    WeightTable table;
    table.prior = prior.weights();
    table.centralized = central.posterior.weights();
    table.decentralized = decentralized.agent_posteriors.front().weights();
    report.weights = std::move(table);
    return report;
}

EpisodeReport run_heterogeneous(const Scenario& s) {
    EpisodeReport report;
    report.seed = s.seed;
    report.mode = s.mode;
    report.warnings = s.warnings;

    const auto forward =
        fuse_priors(s.priors[0], s.priors[1], s.prune_threshold);
    const auto backward =
        fuse_priors(s.priors[1], s.priors[0], s.prune_threshold);

    // both agents must arrive at the same estimate after transposition
    const double weight_gap =
        (forward.association_weights -
         backward.association_weights.transpose())
            .cwiseAbs()
            .maxCoeff();
    if (weight_gap > 1e-9) {
        throw Error("heterogeneous fusion lost agent symmetry (gap " +
                    std::to_string(weight_gap) + ")");
    }

    report.agent_posteriors = {forward.fused, backward.fused};
    report.association_weights = forward.association_weights;
    return report;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json mixture_to_json(const GaussianMixture& m) {
    json out;
    out["components"] = json::array();
    for (const auto& wc : m.components()) {
        json mean = json::array();
        for (Eigen::Index i = 0; i < wc.component.mean().size(); ++i) {
            mean.push_back(wc.component.mean()[i]);
        }
        json cov = json::array();  // row-major
        for (Eigen::Index r = 0; r < wc.component.cov().rows(); ++r) {
            for (Eigen::Index c = 0; c < wc.component.cov().cols(); ++c) {
                cov.push_back(wc.component.cov()(r, c));
            }
        }
        out["components"].push_back({{"weight", wc.weight},
                                     {"mean", std::move(mean)},
                                     {"cov_row_major", std::move(cov)}});
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    out << body;
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

}  // namespace

EpisodeReport run_episode(const Scenario& s) {
    EpisodeReport report = s.mode == ScenarioMode::homogeneous
                               ? run_homogeneous(s)
                               : run_heterogeneous(s);
    report.scenario_hash = scenario_hash(s);
    sample_particles(report, s.emit_particles);
    return report;
}

void emit_outputs(const EpisodeReport& r,
                  const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + out_dir.string() +
                    ": " + ec.message());
    }

    // weights.csv
    std::string csv;
    if (r.mode == ScenarioMode::homogeneous) {
        csv = "component,prior,centralized,decentralized\n";
        const auto& w = *r.weights;
        for (Eigen::Index i = 0; i < w.prior.size(); ++i) {
            csv += std::to_string(i + 1) + "," + fmt(w.prior[i]) + "," +
                   fmt(w.centralized[i]) + "," + fmt(w.decentralized[i]) +
                   "\n";
        }
    } else {
        csv = "i1,j2,weight\n";
        for (Eigen::Index i = 0; i < r.association_weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < r.association_weights.cols(); ++j) {
                csv += std::to_string(i + 1) + "," + std::to_string(j + 1) +
                       "," + fmt(r.association_weights(i, j)) + "\n";
            }
        }
    }
    write_file(out_dir / "weights.csv", csv);

    // mixture.json: the canonical fused mixture (agent 0's posterior)
    write_file(out_dir / "mixture.json",
               mixture_to_json(r.agent_posteriors.front()).dump(2) + "\n");

    // particles.csv, only when sampling was requested
    if (!r.particles.empty()) {
        std::string pcsv = "x,y,component,agent\n";
        for (const auto& row : r.particles) {
            pcsv += fmt(row.x) + "," + fmt(row.y) + "," +
                    std::to_string(row.component) + "," +
                    std::to_string(row.agent) + "\n";
        }
        write_file(out_dir / "particles.csv", pcsv);
    }

    // report.json
    json rep;
    rep["scenario_hash"] = r.scenario_hash;
    rep["seed"] = r.seed;
    rep["mode"] = r.mode == ScenarioMode::homogeneous ? "homogeneous"
                                                      : "heterogeneous";
    rep["agents"] = r.agent_posteriors.size();
    rep["consensus"] = {{"iterations", r.consensus_iterations},
                        {"converged", r.consensus_converged}};
    rep["warnings"] = r.warnings;
    if (r.mode == ScenarioMode::homogeneous) {
        const auto& w = *r.weights;
        json table;
        for (const char* key : {"prior", "centralized", "decentralized"}) {
            table[key] = json::array();
        }
        for (Eigen::Index i = 0; i < w.prior.size(); ++i) {
            table["prior"].push_back(w.prior[i]);
            table["centralized"].push_back(w.centralized[i]);
            table["decentralized"].push_back(w.decentralized[i]);
        }
        rep["weights"] = std::move(table);
        rep["observations"] = r.observations;
    } else {
        json assoc = json::array();
        for (Eigen::Index i = 0; i < r.association_weights.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index jj = 0; jj < r.association_weights.cols(); ++jj) {
                row.push_back(r.association_weights(i, jj));
            }
            assoc.push_back(std::move(row));
        }
        rep["association_weights"] = std::move(assoc);
    }
    write_file(out_dir / "report.json", rep.dump(2) + "\n");
}

}  // namespace gmfuse
