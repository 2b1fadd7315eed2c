#include "gmfuse/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gmfuse/errors.hpp"
#include "gmfuse/logsumexp.hpp"

namespace gmfuse {

namespace {

// Batch covariance-form Kalman update of one component against all
// sensors, every measurement linearized at the component's prior mean.
Gaussian batch_update(const Gaussian& prior,
                      const std::vector<double>& observations,
                      const std::vector<RangeSensor>& sensors,
                      LinearizationMode mode) {
    const int n = prior.dim();
    const int m = static_cast<int>(sensors.size());
    Mat H(m, n);
    Vec innovation(m);
    Mat R = Mat::Zero(m, m);
    for (int s = 0; s < m; ++s) {
        const auto& sensor = sensors[static_cast<std::size_t>(s)];
        const Mat Hs = range_jacobian(prior.mean(), sensor);
        H.row(s) = Hs.row(0);
        const double z = observations[static_cast<std::size_t>(s)];
        innovation[s] = mode == LinearizationMode::ekf
                            ? z - predicted_range(prior.mean(), sensor)
                            : z - (Hs * prior.mean())(0);
        R(s, s) = sensor.noise_var();
    }
    const Mat S = H * prior.cov() * H.transpose() + R;
    const Mat K =
        S.transpose().ldlt().solve(H * prior.cov()).transpose();
    Vec mean = prior.mean() + K * innovation;
    const Mat I_KH = Mat::Identity(n, n) - K * H;
    Mat cov = I_KH * prior.cov() * I_KH.transpose() + K * R * K.transpose();
    return Gaussian(std::move(mean), std::move(cov));
}

}  // namespace

CentralizedResult fuse_centralized(const GaussianMixture& prior,
                                   const std::vector<double>& observations,
                                   const std::vector<RangeSensor>& sensors,
                                   LinearizationMode mode) {
    if (observations.size() != sensors.size() || sensors.empty()) {
        throw ContractError(
            "fuse_centralized: one observation per sensor required");
    }
    const int n_comp = prior.size();
    Vec log_lik(n_comp);
    std::vector<Gaussian> posts;
    posts.reserve(static_cast<std::size_t>(n_comp));

    for (int i = 0; i < n_comp; ++i) {
        const auto& c = prior.components()[static_cast<std::size_t>(i)];
        posts.push_back(batch_update(c.component, observations, sensors, mode));

        // prior/posterior ratio at the prior mean plus the direct sum of
        // local log likelihoods
        double sum_loglik = 0.0;
        for (std::size_t s = 0; s < sensors.size(); ++s) {
            sum_loglik +=
                measurement_loglik(observations[s], c.component.mean(),
                                   sensors[s]);
        }
        log_lik[i] = gaussian_logpdf(c.component, c.component.mean()) -
                     gaussian_logpdf(posts.back(), c.component.mean()) +
                     sum_loglik;
    }

    std::vector<double> log_weighted(static_cast<std::size_t>(n_comp));
    for (int i = 0; i < n_comp; ++i) {
        const double w = prior.components()[static_cast<std::size_t>(i)].weight;
        log_weighted[static_cast<std::size_t>(i)] =
            w > 0.0 ? std::log(w) + log_lik[i]
                    : -std::numeric_limits<double>::infinity();
    }
    const double log_norm = log_sum_exp(log_weighted);
    if (!std::isfinite(log_norm)) {
        throw DegenerateError("fuse_centralized: all weights vanished");
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
    return CentralizedResult{GaussianMixture(std::move(comps)),
                             std::move(log_lik)};
}

Vec weight_update_at_point(const GaussianMixture& prior,
                           const GaussianMixture& posterior, const Vec& x_c) {
    if (prior.size() != posterior.size()) {
        throw ContractError(
            "weight_update_at_point: component counts differ");
    }
    const int n_comp = prior.size();
    std::vector<double> log_weighted(static_cast<std::size_t>(n_comp));
    for (int i = 0; i < n_comp; ++i) {
        const double log_prior = gaussian_logpdf(
            prior.components()[static_cast<std::size_t>(i)].component, x_c);
        const double log_post = gaussian_logpdf(
            posterior.components()[static_cast<std::size_t>(i)].component,
            x_c);
        if (log_prior <= -700.0 || log_post <= -700.0) {
            throw ConditioningError(
                "weight_update_at_point: x_c outside the numerical support "
                "of component " +
                std::to_string(i));
        }
        const double w = prior.components()[static_cast<std::size_t>(i)].weight;
        log_weighted[static_cast<std::size_t>(i)] =
            w > 0.0 ? std::log(w) + log_prior - log_post
                    : -std::numeric_limits<double>::infinity();
    }
    const double log_norm = log_sum_exp(log_weighted);
    if (!std::isfinite(log_norm)) {
        throw DegenerateError("weight_update_at_point: all weights vanished");
    }
    Vec weights(n_comp);
    for (int i = 0; i < n_comp; ++i) {
        weights[i] =
            std::exp(log_weighted[static_cast<std::size_t>(i)] - log_norm);
    }
    weights /= weights.sum();
    return weights;
}

}  // namespace gmfuse
