#pragma once

#include <cstdint>
#include <vector>

#include "gmfuse/gaussian.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

/// One weighted mixture component.
struct WeightedGaussian {
    double weight;
    Gaussian component;
};

/// Weighted sum of Gaussian PDFs. Construction checks that the weights are
/// nonnegative and sum to 1 within 1e-9, and that every component shares
/// one state dimension. Immutable after construction.
class GaussianMixture {
public:
    explicit GaussianMixture(std::vector<WeightedGaussian> components);

    const std::vector<WeightedGaussian>& components() const { return components_; }
    int size() const { return static_cast<int>(components_.size()); }
    int dim() const { return components_.front().component.dim(); }

    /// Component weights as a vector.
    Vec weights() const;

private:
    std::vector<WeightedGaussian> components_;
};

/// Natural-log mixture density at x, computed through log-sum-exp.
double mixture_logpdf(const GaussianMixture& m, const Vec& x);

/// `count` draws from the mixture, deterministic per seed: one uniform
/// selects the component by cumulative weight, then mean + chol(P) * xi.
std::vector<Vec> sample_mixture(const GaussianMixture& m, int count,
                                std::uint64_t seed);

/// Same draws as sample_mixture plus the selected component index per draw.
struct LabeledSamples {
    std::vector<Vec> points;
    std::vector<int> component;
};
LabeledSamples sample_mixture_labeled(const GaussianMixture& m, int count,
                                      std::uint64_t seed);

}  // namespace gmfuse
