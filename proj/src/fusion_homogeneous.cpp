#include "gmfuse/fusion_homogeneous.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gmfuse/errors.hpp"
#include "gmfuse/logsumexp.hpp"

namespace gmfuse {

InfoDelta local_component_update(const Gaussian& component, double z,
                                 const RangeSensor& sensor,
                                 LinearizationMode mode) {
    InfoDelta delta = info_contribution(z, component.mean(), sensor, mode);
    delta.log_lik = measurement_loglik(z, component.mean(), sensor);
    return delta;
}

double component_likelihood_log(const Gaussian& prior_i,
                                const Gaussian& post_i,
                                double consensus_loglik_sum) {
    return gaussian_logpdf(prior_i, prior_i.mean()) -
           gaussian_logpdf(post_i, prior_i.mean()) + consensus_loglik_sum;
}

Vec pack_component_deltas(const std::vector<InfoDelta>& deltas) {
    const int n_comp = static_cast<int>(deltas.size());
    const int n = static_cast<int>(deltas.front().di.size());
    const int tri = n * (n + 1) / 2;
    Vec payload(n_comp * (n + tri + 1));
    int at = 0;
    for (const auto& d : deltas) {
        payload.segment(at, n) = d.di;
        at += n;
    }
    for (const auto& d : deltas) {
        for (int r = 0; r < n; ++r) {
            for (int c = r; c < n; ++c) {
                payload[at++] = d.dI(r, c);
            }
        }
    }
    for (const auto& d : deltas) {
        payload[at++] = d.log_lik;
    }
    return payload;
}

std::vector<InfoDelta> unpack_component_deltas(const Vec& payload,
                                               int n_components,
                                               int state_dim) {
    const int n = state_dim;
    const int tri = n * (n + 1) / 2;
    if (payload.size() != n_components * (n + tri + 1)) {
        throw ContractError("payload length does not match layout");
    }
    std::vector<InfoDelta> deltas(static_cast<std::size_t>(n_components));
    int at = 0;
    for (auto& d : deltas) {
        d.di = payload.segment(at, n);
        at += n;
    }
    for (auto& d : deltas) {
        d.dI = Mat::Zero(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = r; c < n; ++c) {
                d.dI(r, c) = payload[at++];
                d.dI(c, r) = d.dI(r, c);
            }
        }
    }
    for (auto& d : deltas) {
        d.log_lik = payload[at++];
    }
    return deltas;
}

HomogeneousFusionResult fuse_homogeneous(
    const SensorGraph& g, const GaussianMixture& prior,
    const std::vector<double>& observations,
    const std::vector<RangeSensor>& sensors, const ConsensusConfig& config,
    LinearizationMode mode) {
    const int n_agents = g.node_count();
    if (static_cast<int>(observations.size()) != n_agents ||
        static_cast<int>(sensors.size()) != n_agents) {
        throw ContractError(
            "fuse_homogeneous: one observation and sensor per agent required");
    }
    const int n_comp = prior.size();
    const int n = prior.dim();

    // prior information form, shared by every agent
    std::vector<InformationState> prior_info;
    prior_info.reserve(static_cast<std::size_t>(n_comp));
    for (const auto& wc : prior.components()) {
        prior_info.push_back(to_information(wc.component));
    }

    // local updates, stacked into one payload per agent
    std::vector<ConsensusPayload> payloads;
    payloads.reserve(static_cast<std::size_t>(n_agents));
    for (int s = 0; s < n_agents; ++s) {
        std::vector<InfoDelta> deltas;
        deltas.reserve(static_cast<std::size_t>(n_comp));
        for (const auto& wc : prior.components()) {
            deltas.push_back(local_component_update(
                wc.component, observations[static_cast<std::size_t>(s)],
                sensors[static_cast<std::size_t>(s)], mode));
        }
        payloads.push_back(pack_component_deltas(deltas));
    }

    const ConsensusResult consensus =
        run_consensus(g, std::move(payloads), config.tol, config.max_iters);

    HomogeneousFusionResult result;
    result.consensus_iterations = consensus.iterations;
    result.consensus_converged = consensus.converged;
    result.agent_log_likelihoods = Mat(n_agents, n_comp);
    result.agent_posteriors.reserve(static_cast<std::size_t>(n_agents));

    const double scale = static_cast<double>(n_agents);
    for (int s = 0; s < n_agents; ++s) {
        const auto deltas = unpack_component_deltas(
            consensus.values[static_cast<std::size_t>(s)], n_comp, n);

        std::vector<double> log_weighted(static_cast<std::size_t>(n_comp));
        std::vector<Gaussian> posts;
        posts.reserve(static_cast<std::size_t>(n_comp));
        for (int i = 0; i < n_comp; ++i) {
            const auto& d = deltas[static_cast<std::size_t>(i)];
            const auto& pi = prior_info[static_cast<std::size_t>(i)];
            InformationState post_info(pi.y() + scale * d.di,
                                       pi.Y() + scale * d.dI);
            posts.push_back(from_information(post_info));

            const double log_l = component_likelihood_log(
                prior.components()[static_cast<std::size_t>(i)].component,
                posts.back(), scale * d.log_lik);
            result.agent_log_likelihoods(s, i) = log_l;
            const double w =
                prior.components()[static_cast<std::size_t>(i)].weight;
            log_weighted[static_cast<std::size_t>(i)] =
                w > 0.0 ? std::log(w) + log_l
                        : -std::numeric_limits<double>::infinity();
        }

        const double log_norm = log_sum_exp(log_weighted);
        if (!std::isfinite(log_norm)) {
            throw DegenerateError(
                "fuse_homogeneous: all component weights vanished");
        }
        std::vector<WeightedGaussian> comps;
        comps.reserve(static_cast<std::size_t>(n_comp));
        double total = 0.0;
        for (int i = 0; i < n_comp; ++i) {
            const double w =
                std::exp(log_weighted[static_cast<std::size_t>(i)] - log_norm);
            total += w;
            comps.push_back({w, posts[static_cast<std::size_t>(i)]});
        }
        for (auto& c : comps) {
            c.weight /= total;
        }
        result.agent_posteriors.emplace_back(std::move(comps));
    }
    return result;
}

}  // namespace gmfuse
