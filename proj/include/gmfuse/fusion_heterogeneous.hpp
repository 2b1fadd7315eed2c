#pragma once

#include "gmfuse/gaussian.hpp"
#include "gmfuse/mixture.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

/// Two-agent prior fusion output. association_weights(i, j) is the
/// posterior weight of the component fused from agent 1's component i and
/// agent 2's component j; `fused` lists the kept components row-major
/// over (i, j). Swapping the agents transposes the matrix and leaves the
/// fused components unchanged.
struct HeterogeneousFusionResult {
    GaussianMixture fused;
    Mat association_weights;  // N1 x N2, sums to 1 before pruning
};

/// Kalman fusion of two Gaussian estimates treating one mean as an
/// identity-mapped pseudo-observation of the other. Symmetric in its
/// arguments; the fused covariance equals (P1^-1 + P2^-1)^-1.
Gaussian pairwise_component_fuse(const Gaussian& g1, const Gaussian& g2);

/// ln N(mu1 - mu2; 0, P1 + P2): log likelihood that one component's mean
/// is the pseudo-observation generated by the other. Swap-symmetric.
double association_loglik(const Gaussian& g1, const Gaussian& g2);

/// Fuses two agents' differing prior mixtures into one shared posterior
/// with up to N1*N2 components. Components with posterior weight below
/// prune_threshold are dropped and the rest renormalized; the default of
/// zero keeps everything.
HeterogeneousFusionResult fuse_priors(const GaussianMixture& m1,
                                      const GaussianMixture& m2,
                                      double prune_threshold = 0.0);

}  // namespace gmfuse
