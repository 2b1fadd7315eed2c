#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gmfuse/errors.hpp"
#include "gmfuse/fusion_heterogeneous.hpp"
#include "test_support.hpp"

using namespace gmfuse;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("pairwise fuse of identical estimates halves the covariance") {
    Gaussian g(v2(2.0, -1.0), Mat::Identity(2, 2));
    const Gaussian fused = pairwise_component_fuse(g, g);
    CHECK((fused.mean() - g.mean()).norm() < 1e-14);
    CHECK((fused.cov() - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("pairwise fuse of equal covariances lands on the midpoint") {
    Gaussian a(v2(0.0, 0.0), Mat::Identity(2, 2));
    Gaussian b(v2(2.0, 0.0), Mat::Identity(2, 2));
    const Gaussian fused = pairwise_component_fuse(a, b);
    CHECK(fused.mean()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fused.mean()[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((fused.cov() - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("pairwise fuse matches the Woodbury identity and swaps cleanly") {
    Rng rng(89);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform() * 4);
        const Gaussian a = testsup::random_gaussian(dim, rng);
        const Gaussian b = testsup::random_gaussian(dim, rng);

        const Gaussian ab = pairwise_component_fuse(a, b);
        const Gaussian ba = pairwise_component_fuse(b, a);
        CHECK((ab.mean() - ba.mean()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ab.cov() - ba.cov()).cwiseAbs().maxCoeff() < 1e-12);

        // independent route: (P1^-1 + P2^-1)^-1
        const Mat info_sum = a.cov().inverse() + b.cov().inverse();
        const Mat cov_ref = info_sum.inverse();
        CHECK((ab.cov() - cov_ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("association likelihood closed form at zero residual") {
    Gaussian a(v2(1.0, 1.0), Mat::Identity(2, 2));
    Gaussian b(v2(1.0, 1.0), Mat::Identity(2, 2));
    // ln N(0; 0, 2I) in 2-D = -ln(4 pi)
    CHECK(association_loglik(a, b) ==
          doctest::Approx(-2.5310242469692907).epsilon(1e-13));
}

TEST_CASE("association likelihood is swap-symmetric") {
    Rng rng(97);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform() * 4);
        const Gaussian a = testsup::random_gaussian(dim, rng);
        const Gaussian b = testsup::random_gaussian(dim, rng);
        CHECK(std::abs(association_loglik(a, b) - association_loglik(b, a)) <
              1e-15);
    }
}

TEST_CASE("well-separated components have vanishing association weight") {
    // Mahalanobis distance 10 under P1 + P2 = 2I: quadratic term -25
    Gaussian a(v2(0.0, 0.0), Mat::Identity(2, 2));
    Gaussian b(v2(10.0 * std::sqrt(2.0), 0.0), Mat::Identity(2, 2));
    CHECK(association_loglik(a, b) < -50.0);
}

TEST_CASE("fuse_priors produces one component per pair") {
    Rng rng(101);
    const GaussianMixture m1 = testsup::random_mixture(2, 2, rng, 1.0);
    const GaussianMixture m2 = testsup::random_mixture(3, 2, rng, 1.0);
    const auto result = fuse_priors(m1, m2);
    CHECK(result.fused.size() == 6);
    CHECK(result.association_weights.rows() == 2);
    CHECK(result.association_weights.cols() == 3);
    CHECK(result.association_weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.association_weights.minCoeff() >= 0.0);
    CHECK(result.fused.weights().sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identical single-component priors fuse to half the spread") {
    Gaussian g(v2(3.0, 3.0), 2.0 * Mat::Identity(2, 2));
    GaussianMixture m({{1.0, g}});
    const auto result = fuse_priors(m, m);
    CHECK(result.fused.size() == 1);
    CHECK(result.fused.components()[0].weight == doctest::Approx(1.0));
    CHECK((result.fused.components()[0].component.mean() - g.mean()).norm() <
          1e-12);
    CHECK((result.fused.components()[0].component.cov() - Mat::Identity(2, 2))
              .norm() < 1e-12);
}

TEST_CASE("consistent and accurate priors keep every association alive") {
    // every component of both agents overlaps every other
    std::vector<WeightedGaussian> a;
    a.push_back({0.3, Gaussian(v2(0.0, 0.0), 4.0 * Mat::Identity(2, 2))});
    a.push_back({0.7, Gaussian(v2(2.0, 2.0), 4.0 * Mat::Identity(2, 2))});
    std::vector<WeightedGaussian> b;
    b.push_back({0.25, Gaussian(v2(1.0, 0.0), 4.0 * Mat::Identity(2, 2))});
    b.push_back({0.30, Gaussian(v2(0.0, 1.0), 4.0 * Mat::Identity(2, 2))});
    b.push_back({0.45, Gaussian(v2(2.0, 1.0), 4.0 * Mat::Identity(2, 2))});

    const auto result = fuse_priors(GaussianMixture(a), GaussianMixture(b));
    CHECK(result.fused.size() == 6);
    CHECK(result.association_weights.minCoeff() > 0.01);
    CHECK(result.association_weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("agent order only transposes the association table") {
    Rng rng(103);
    for (int trial = 0; trial < 30; ++trial) {
        const GaussianMixture m1 =
            testsup::random_mixture(1 + static_cast<int>(rng.uniform() * 3), 2,
                                    rng, 1.5);
        const GaussianMixture m2 =
            testsup::random_mixture(1 + static_cast<int>(rng.uniform() * 3), 2,
                                    rng, 1.5);
        const auto fwd = fuse_priors(m1, m2);
        const auto bwd = fuse_priors(m2, m1);

        CHECK((fwd.association_weights - bwd.association_weights.transpose())
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);

        // component (i, j) of the forward run is component (j, i) backward
        const int n1 = m1.size(), n2 = m2.size();
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n2; ++j) {
                const auto& f = fwd.fused.components()[i * n2 + j];
                const auto& g = bwd.fused.components()[j * n1 + i];
                CHECK(std::abs(f.weight - g.weight) < 1e-12);
                CHECK((f.component.mean() - g.component.mean())
                          .cwiseAbs()
                          .maxCoeff() < 1e-12);
                CHECK((f.component.cov() - g.component.cov())
                          .cwiseAbs()
                          .maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("fusion never inflates uncertainty (Loewner order)") {
    Rng rng(107);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform() * 4);
        const Gaussian a = testsup::random_gaussian(dim, rng);
        const Gaussian b = testsup::random_gaussian(dim, rng);
        const Gaussian fused = pairwise_component_fuse(a, b);
        for (const Gaussian* parent : {&a, &b}) {
            Eigen::SelfAdjointEigenSolver<Mat> eig(parent->cov() - fused.cov());
            CHECK(eig.eigenvalues().minCoeff() > -1e-12);
        }
    }
}

TEST_CASE("pruning drops faint components and renormalizes") {
    std::vector<WeightedGaussian> a;
    a.push_back({0.5, Gaussian(v2(0.0, 0.0), Mat::Identity(2, 2))});
    a.push_back({0.5, Gaussian(v2(40.0, 0.0), Mat::Identity(2, 2))});
    std::vector<WeightedGaussian> b;
    b.push_back({1.0, Gaussian(v2(0.5, 0.0), Mat::Identity(2, 2))});

    const auto unpruned = fuse_priors(GaussianMixture(a), GaussianMixture(b));
    CHECK(unpruned.fused.size() == 2);

    const auto pruned =
        fuse_priors(GaussianMixture(a), GaussianMixture(b), 1e-4);
    CHECK(pruned.fused.size() == 1);
    CHECK(pruned.fused.components()[0].weight == doctest::Approx(1.0));
    // the association table itself is reported unpruned
    CHECK(pruned.association_weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fuse_priors argument contracts") {
    Gaussian g2(Vec::Zero(2), Mat::Identity(2, 2));
    Gaussian g3(Vec::Zero(3), Mat::Identity(3, 3));
    GaussianMixture m2({{1.0, g2}});
    GaussianMixture m3({{1.0, g3}});
    CHECK_THROWS_AS(fuse_priors(m2, m3), ContractError);
    CHECK_THROWS_AS(pairwise_component_fuse(g2, g3), ContractError);
    CHECK_THROWS_AS(association_loglik(g2, g3), ContractError);
}
