#include "gmfuse/fusion_heterogeneous.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gmfuse/errors.hpp"
#include "gmfuse/logsumexp.hpp"

namespace gmfuse {

Gaussian pairwise_component_fuse(const Gaussian& g1, const Gaussian& g2) {
    if (g1.dim() != g2.dim()) {
        throw ContractError("pairwise fuse: dimension mismatch");
    }
    const Mat sum = g1.cov() + g2.cov();
    const Eigen::LLT<Mat> llt(sum);
    if (llt.info() != Eigen::Success) {
        throw SingularityError("pairwise fuse: P1 + P2 not invertible");
    }
    // Woodbury form (P1^-1 + P2^-1)^-1 = P1 - P1 (P1+P2)^-1 P1, computed as
    // P1 (P1+P2)^-1 P2 which is symmetric under argument swap by construction
    Mat fused_cov = g1.cov() * llt.solve(g2.cov());
    fused_cov = 0.5 * (fused_cov + fused_cov.transpose()).eval();
    Vec fused_mean =
        g1.mean() + g1.cov() * llt.solve(g2.mean() - g1.mean());
    return Gaussian(std::move(fused_mean), std::move(fused_cov));
}

double association_loglik(const Gaussian& g1, const Gaussian& g2) {
    if (g1.dim() != g2.dim()) {
        throw ContractError("association likelihood: dimension mismatch");
    }
    const Mat sum = g1.cov() + g2.cov();
    const Eigen::LLT<Mat> llt(sum);
    const Vec diff = g1.mean() - g2.mean();
    const double maha2 = diff.dot(llt.solve(diff));
    const double log_det =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double d = static_cast<double>(g1.dim());
    return -0.5 * (maha2 + log_det + d * std::log(2.0 * std::numbers::pi));
}

HeterogeneousFusionResult fuse_priors(const GaussianMixture& m1,
                                      const GaussianMixture& m2,
                                      double prune_threshold) {
    if (m1.dim() != m2.dim()) {
        throw ContractError("fuse_priors: state dimension mismatch");
    }
    const int n1 = m1.size();
    const int n2 = m2.size();

    std::vector<double> log_weighted(static_cast<std::size_t>(n1 * n2));
    std::vector<Gaussian> fused_components;
    fused_components.reserve(static_cast<std::size_t>(n1 * n2));

    // row-major over (i, j) so both agents enumerate pairs identically
    for (int i = 0; i < n1; ++i) {
        const auto& c1 = m1.components()[static_cast<std::size_t>(i)];
        for (int j = 0; j < n2; ++j) {
            const auto& c2 = m2.components()[static_cast<std::size_t>(j)];
            fused_components.push_back(
                pairwise_component_fuse(c1.component, c2.component));
            const double log_w =
                c1.weight > 0.0 && c2.weight > 0.0
                    ? std::log(c1.weight) + std::log(c2.weight) +
                          association_loglik(c1.component, c2.component)
                    : -std::numeric_limits<double>::infinity();
            log_weighted[static_cast<std::size_t>(i * n2 + j)] = log_w;
        }
    }

    const double log_norm = log_sum_exp(log_weighted);
    if (!std::isfinite(log_norm)) {
        throw DegenerateError("fuse_priors: all association weights vanished");
    }

    Mat association(n1, n2);
    std::vector<WeightedGaussian> kept;
    kept.reserve(static_cast<std::size_t>(n1 * n2));
    double kept_total = 0.0;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const std::size_t k = static_cast<std::size_t>(i * n2 + j);
            const double w = std::exp(log_weighted[k] - log_norm);
            association(i, j) = w;
            if (w >= prune_threshold) {
                kept.push_back({w, fused_components[k]});
                kept_total += w;
            }
        }
    }
    if (kept.empty() || kept_total <= 0.0) {
        throw DegenerateError("fuse_priors: pruning removed every component");
    }
    for (auto& c : kept) {
        c.weight /= kept_total;
    }
    return HeterogeneousFusionResult{GaussianMixture(std::move(kept)),
                                     std::move(association)};
}

}  // namespace gmfuse
