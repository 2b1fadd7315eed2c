#pragma once

#include <vector>

#include "gmfuse/gaussian.hpp"
#include "gmfuse/mixture.hpp"
#include "gmfuse/network.hpp"
#include "gmfuse/sensing.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

struct ConsensusConfig {
    double tol = 1e-10;
    int max_iters = 10000;
};

/// Output of the shared-prior fusion. On a connected graph at convergence
/// every agent's posterior is the same mixture up to consensus tolerance.
struct HomogeneousFusionResult {
    std::vector<GaussianMixture> agent_posteriors;  // one per agent
    Mat agent_log_likelihoods;                      // S x N, ln l_i per agent
    int consensus_iterations = 0;
    bool consensus_converged = false;
};

/// One agent's information increments for one prior component, with
/// log_lik seeded to the agent's own local log measurement likelihood so
/// that S times the consensus average recovers the network-wide sum.
InfoDelta local_component_update(const Gaussian& component, double z,
                                 const RangeSensor& sensor,
                                 LinearizationMode mode);

/// ln l_i evaluated at x_c = the prior component mean: the prior-to-
/// posterior density ratio at the mean plus the network-wide sum of log
/// measurement likelihoods (supplied as S times the consensus average).
double component_likelihood_log(const Gaussian& prior_i,
                                const Gaussian& post_i,
                                double consensus_loglik_sum);

/// Consensus payload layout: all components' di vectors, then the
/// row-major upper triangle of each dI, then the log_lik scalars. The
/// layout is fixed so one generic consensus run carries every component.
Vec pack_component_deltas(const std::vector<InfoDelta>& deltas);
std::vector<InfoDelta> unpack_component_deltas(const Vec& payload,
                                               int n_components,
                                               int state_dim);

/// Decentralized fusion of a shared prior mixture: per-component
/// information consensus plus log-likelihood consensus for the weight
/// update. One observation and sensor per agent; graph connectivity is
/// not enforced (disconnection shows up as per-component consensus values
/// and a false converged flag where applicable).
HomogeneousFusionResult fuse_homogeneous(
    const SensorGraph& g, const GaussianMixture& prior,
    const std::vector<double>& observations,
    const std::vector<RangeSensor>& sensors, const ConsensusConfig& config,
    LinearizationMode mode = LinearizationMode::ekf);

}  // namespace gmfuse
