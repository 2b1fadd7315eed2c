#include "gmfuse/mixture.hpp"

#include <cmath>
#include <utility>

#include "gmfuse/errors.hpp"
#include "gmfuse/logsumexp.hpp"
#include "gmfuse/rng.hpp"

namespace gmfuse {

GaussianMixture::GaussianMixture(std::vector<WeightedGaussian> components)
    : components_(std::move(components)) {
    if (components_.empty()) {
        throw ContractError("mixture must have at least one component");
    }
    double sum = 0.0;
    const int n = components_.front().component.dim();
    for (const auto& wc : components_) {
        if (wc.weight < 0.0) {
            throw ContractError("mixture weights must be nonnegative");
        }
        if (wc.component.dim() != n) {
            throw ContractError("mixture components must share one dimension");
        }
        sum += wc.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ContractError("mixture weights must sum to 1 (got " +
                            std::to_string(sum) + ")");
    }
}

Vec GaussianMixture::weights() const {
    Vec w(size());
    for (int i = 0; i < size(); ++i) {
        w[i] = components_[static_cast<std::size_t>(i)].weight;
    }
    return w;
}

double mixture_logpdf(const GaussianMixture& m, const Vec& x) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(m.size()));
    for (const auto& wc : m.components()) {
        terms.push_back(std::log(wc.weight) + gaussian_logpdf(wc.component, x));
    }
    return log_sum_exp(terms);
}

LabeledSamples sample_mixture_labeled(const GaussianMixture& m, int count,
                                      std::uint64_t seed) {
    if (count < 1) {
        throw ContractError("sample count must be >= 1");
    }
    Rng rng(seed);
    LabeledSamples out;
    out.points.reserve(static_cast<std::size_t>(count));
    out.component.reserve(static_cast<std::size_t>(count));

    std::vector<Mat> chol;
    chol.reserve(static_cast<std::size_t>(m.size()));
    for (const auto& wc : m.components()) {
        chol.push_back(Eigen::LLT<Mat>(wc.component.cov()).matrixL());
    }

    for (int k = 0; k < count; ++k) {
        const double u = rng.uniform();
        int idx = m.size() - 1;
        double acc = 0.0;
        for (int i = 0; i < m.size(); ++i) {
            acc += m.components()[static_cast<std::size_t>(i)].weight;
            if (u < acc) {
                idx = i;
                break;
            }
        }
        const auto& g = m.components()[static_cast<std::size_t>(idx)].component;
        out.points.push_back(g.mean() +
                             chol[static_cast<std::size_t>(idx)] *
                                 rng.normal_vector(g.dim()));
        out.component.push_back(idx);
    }
    return out;
}

std::vector<Vec> sample_mixture(const GaussianMixture& m, int count,
                                std::uint64_t seed) {
    return sample_mixture_labeled(m, count, seed).points;
}

}  // namespace gmfuse
