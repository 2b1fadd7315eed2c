#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmfuse/dynamics.hpp"
#include "gmfuse/errors.hpp"
#include "test_support.hpp"

using namespace gmfuse;

TEST_CASE("propagate_truth without noise") {
    LinearDynamics identity(Mat::Identity(2, 2), Mat::Zero(2, 2));
    Vec x(2);
    x << 3.0, 4.0;
    CHECK(propagate_truth(x, identity, 1) == x);

    LinearDynamics doubling(2.0 * Mat::Identity(2, 2), Mat::Zero(2, 2));
    Vec y(2);
    y << 1.0, -1.0;
    const Vec out = propagate_truth(y, doubling, 1);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == doctest::Approx(-2.0));

    CHECK_THROWS_AS(propagate_truth(Vec::Zero(3), identity, 1), ContractError);
}

TEST_CASE("propagate_truth noise covariance matches Q") {
    LinearDynamics d(Mat::Identity(2, 2), Mat::Identity(2, 2));
    const int draws = 100000;
    Mat acc = Mat::Zero(2, 2);
    for (int k = 0; k < draws; ++k) {
        const Vec w = propagate_truth(Vec::Zero(2), d, Rng::derive(77, k));
        acc += w * w.transpose();
    }
    const Mat sample_cov = acc / draws;
    CHECK((sample_cov - Mat::Identity(2, 2)).norm() <
          0.05 * Mat::Identity(2, 2).norm());
}

TEST_CASE("predict_information no-op and additive cases") {
    Gaussian g(Vec::Ones(2), Mat::Identity(2, 2));
    LinearDynamics still(Mat::Identity(2, 2), Mat::Zero(2, 2));
    const InformationState same = predict_information(to_information(g), still);
    CHECK((same.Y() - Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK((same.y() - Vec::Ones(2)).norm() < 1e-12);

    LinearDynamics diffusive(Mat::Identity(2, 2), Mat::Identity(2, 2));
    const InformationState widened =
        predict_information(to_information(g), diffusive);
    CHECK((widened.Y() - 0.5 * Mat::Identity(2, 2)).norm() < 1e-12);
    const Gaussian back = from_information(widened);
    CHECK((back.mean() - g.mean()).norm() < 1e-12);
    CHECK((back.cov() - 2.0 * Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("predict_information matches the covariance-form prediction") {
    // 4-D constant-velocity model, dt = 1
    Mat f = Mat::Identity(4, 4);
    f(0, 2) = 1.0;
    f(1, 3) = 1.0;
    Rng rng(13);
    Mat q = testsup::random_spd(4, rng, 0.1);
    LinearDynamics d(f, q);

    for (int trial = 0; trial < 20; ++trial) {
        const Gaussian prior = testsup::random_gaussian(4, rng);
        const Gaussian predicted =
            from_information(predict_information(to_information(prior), d));

        // covariance-form reference computed directly
        const Vec mean_ref = f * prior.mean();
        const Mat cov_ref = f * prior.cov() * f.transpose() + q;
        CHECK((predicted.mean() - mean_ref).norm() <=
              1e-9 * (1.0 + mean_ref.norm()));
        CHECK((predicted.cov() - cov_ref).norm() <= 1e-9 * cov_ref.norm());
    }
}

TEST_CASE("prediction stays SPD and matches covariance form across dims") {
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform() * 6);
        Mat f(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                f(r, c) = rng.normal();
            }
        }
        const Mat q = testsup::random_spd(dim, rng, 0.2);
        LinearDynamics d(f, q);
        const Gaussian prior = testsup::random_gaussian(dim, rng);

        const Gaussian predicted =
            from_information(predict_information(to_information(prior), d));
        const Mat cov_ref = f * prior.cov() * f.transpose() + q;
        CHECK((predicted.cov() - cov_ref).norm() <= 1e-9 * cov_ref.norm());

        Eigen::SelfAdjointEigenSolver<Mat> eig(predicted.cov());
        CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("dynamics construction and degenerate prediction") {
    CHECK_THROWS_AS(LinearDynamics(Mat::Identity(2, 3), Mat::Zero(2, 2)),
                    ContractError);
    CHECK_THROWS_AS(LinearDynamics(Mat::Identity(2, 2), Mat::Zero(3, 3)),
                    ContractError);
    Mat neg = -Mat::Identity(2, 2);
    CHECK_THROWS_AS(LinearDynamics(Mat::Identity(2, 2), neg), ContractError);

    // F = 0, Q = 0 collapses the predicted covariance
    LinearDynamics collapse(Mat::Zero(2, 2), Mat::Zero(2, 2));
    Gaussian g(Vec::Ones(2), Mat::Identity(2, 2));
    CHECK_THROWS_AS(predict_gaussian(g, collapse), SingularityError);
}
