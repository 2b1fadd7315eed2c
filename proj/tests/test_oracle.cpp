#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gmfuse/errors.hpp"
#include "gmfuse/fusion_homogeneous.hpp"
#include "gmfuse/oracle.hpp"
#include "test_support.hpp"

using namespace gmfuse;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

// Sequential scalar-gain EKF sweep, all measurements linearized at the
// original prior mean. Algebraically equal to the batch update but a
// different code path, so it can serve as its reference.
Gaussian sequential_update(const Gaussian& prior,
                           const std::vector<double>& obs,
                           const std::vector<RangeSensor>& sensors) {
    Vec mean = prior.mean();
    Mat cov = prior.cov();
    for (std::size_t s = 0; s < sensors.size(); ++s) {
        const Mat h = range_jacobian(prior.mean(), sensors[s]);
        const double sv =
            (h * cov * h.transpose())(0, 0) + sensors[s].noise_var();
        const Vec k = cov * h.transpose() / sv;
        const double predicted = predicted_range(prior.mean(), sensors[s]) +
                                 (h * (mean - prior.mean()))(0);
        mean += k * (obs[s] - predicted);
        const Mat i_kh = Mat::Identity(prior.dim(), prior.dim()) - k * h;
        cov = i_kh * cov * i_kh.transpose() +
              k * sensors[s].noise_var() * k.transpose();
    }
    return {mean, cov};
}

// Shared-mean mixture: components differ only in covariance, so every
// component linearizes the range model identically and the constant-point
// weight update is algebraically exact.
GaussianMixture shared_mean_mixture(int n_comp, const Vec& mean, Rng& rng) {
    std::vector<WeightedGaussian> comps;
    std::vector<double> raw;
    double total = 0.0;
    for (int i = 0; i < n_comp; ++i) {
        raw.push_back(0.2 + rng.uniform());
        total += raw.back();
    }
    for (int i = 0; i < n_comp; ++i) {
        comps.push_back({raw[static_cast<std::size_t>(i)] / total,
                         Gaussian(mean, testsup::random_spd(2, rng))});
    }
    return GaussianMixture(std::move(comps));
}

}  // namespace

TEST_CASE("centralized fusion with one sensor reduces to a Bayes update") {
    Rng rng(109);
    const GaussianMixture prior = testsup::random_mixture(2, 2, rng, 3.0);
    RangeSensor sensor(v2(20.0, 0.0), 0.7);
    const double z =
        predicted_range(prior.components()[0].component.mean(), sensor) + 0.4;

    const auto result = fuse_centralized(prior, {z}, {sensor});
    const auto seq = sequential_update(prior.components()[0].component, {z},
                                       {sensor});
    CHECK((result.posterior.components()[0].component.mean() - seq.mean())
              .norm() < 1e-9);
    CHECK((result.posterior.components()[0].component.cov() - seq.cov())
              .norm() < 1e-9 * seq.cov().norm());
    CHECK(result.posterior.weights().sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("centralized posterior equals a sequential covariance-form sweep") {
    Rng rng(113);
    for (int trial = 0; trial < 40; ++trial) {
        const int agents = 1 + static_cast<int>(rng.uniform() * 6);
        const GaussianMixture prior = testsup::random_mixture(3, 2, rng, 3.0);
        std::vector<RangeSensor> sensors;
        std::vector<double> obs;
        for (int s = 0; s < agents; ++s) {
            Vec pos = testsup::random_vec(2, rng, 10.0);
            pos[1] += 25.0;
            sensors.emplace_back(pos, 0.4 + rng.uniform());
            obs.push_back(
                predicted_range(prior.components()[0].component.mean(),
                                sensors.back()) +
                rng.normal());
        }
        const auto result = fuse_centralized(prior, obs, sensors);
        for (int i = 0; i < prior.size(); ++i) {
            const Gaussian ref = sequential_update(
                prior.components()[i].component, obs, sensors);
            const auto& got = result.posterior.components()[i].component;
            CHECK((got.mean() - ref.mean()).norm() <=
                  1e-9 * (1.0 + ref.mean().norm()));
            CHECK((got.cov() - ref.cov()).norm() <= 1e-9 * ref.cov().norm());
        }
    }
}

TEST_CASE("weight update at a point: no measurements means no change") {
    Rng rng(127);
    const GaussianMixture prior = testsup::random_mixture(3, 2, rng, 2.0);
    const Vec x_c = v2(0.5, 0.5);
    const Vec updated = weight_update_at_point(prior, prior, x_c);
    for (int i = 0; i < prior.size(); ++i) {
        CHECK(updated[i] ==
              doctest::Approx(prior.components()[i].weight).epsilon(1e-12));
    }
}

TEST_CASE("weight update at a component mean matches the likelihood route") {
    Rng rng(131);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec mean = testsup::random_vec(2, rng, 3.0);
        const GaussianMixture prior = shared_mean_mixture(3, mean, rng);
        std::vector<RangeSensor> sensors;
        std::vector<double> obs;
        for (int s = 0; s < 3; ++s) {
            Vec pos = testsup::random_vec(2, rng, 10.0);
            pos[0] += 25.0;
            sensors.emplace_back(pos, 0.5);
            obs.push_back(predicted_range(mean, sensors.back()) + rng.normal());
        }
        const auto central = fuse_centralized(prior, obs, sensors);

        const Vec at_mean =
            weight_update_at_point(prior, central.posterior, mean);
        for (int i = 0; i < prior.size(); ++i) {
            CHECK(std::abs(at_mean[i] -
                           central.posterior.components()[i].weight) < 1e-9);
        }
    }
}

TEST_CASE("weight update is invariant over admissible evaluation points") {
    Rng rng(137);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec mean = testsup::random_vec(2, rng, 2.0);
        const GaussianMixture prior = shared_mean_mixture(3, mean, rng);
        std::vector<RangeSensor> sensors;
        std::vector<double> obs;
        for (int s = 0; s < 3; ++s) {
            Vec pos = testsup::random_vec(2, rng, 8.0);
            pos[1] += 30.0;
            sensors.emplace_back(pos, 0.5);
            obs.push_back(predicted_range(mean, sensors.back()) + rng.normal());
        }
        const auto central = fuse_centralized(prior, obs, sensors);

        const Vec base = weight_update_at_point(prior, central.posterior, mean);
        for (int k = 0; k < 4; ++k) {
            const Vec x_c = mean + testsup::random_vec(2, rng, 0.4);
            const Vec other =
                weight_update_at_point(prior, central.posterior, x_c);
            CHECK((other - base).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("weight update rejects evaluation points far outside support") {
    Gaussian tight(v2(0.0, 0.0), Mat::Identity(2, 2));
    GaussianMixture prior({{1.0, tight}});
    // Mahalanobis distance 40: quadratic term alone is -800
    const Vec far = v2(40.0, 0.0);
    CHECK_THROWS_AS(weight_update_at_point(prior, prior, far),
                    ConditioningError);
}

TEST_CASE("centralized and decentralized fusion agree on a random scenario") {
    Rng rng(139);
    const int agents = 5;
    const SensorGraph g = testsup::random_connected_graph(agents, rng);
    const GaussianMixture prior = testsup::random_mixture(3, 2, rng, 4.0);
    std::vector<RangeSensor> sensors;
    std::vector<double> obs;
    for (int s = 0; s < agents; ++s) {
        Vec pos = testsup::random_vec(2, rng, 10.0);
        pos[0] -= 30.0;
        sensors.emplace_back(pos, 0.6);
        obs.push_back(predicted_range(prior.components()[0].component.mean(),
                                      sensors.back()) +
                      rng.normal());
    }
    const auto central = fuse_centralized(prior, obs, sensors);
    const auto decentral =
        fuse_homogeneous(g, prior, obs, sensors, {1e-12, 200000});
    REQUIRE(decentral.consensus_converged);
    for (const auto& posterior : decentral.agent_posteriors) {
        for (int i = 0; i < prior.size(); ++i) {
            CHECK(std::abs(posterior.components()[i].weight -
                           central.posterior.components()[i].weight) < 1e-6);
            CHECK((posterior.components()[i].component.mean() -
                   central.posterior.components()[i].component.mean())
                      .norm() < 1e-6);
        }
    }
}
