#include "gmfuse/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "gmfuse/errors.hpp"

namespace gmfuse {

namespace {

// Symmetrize and eigen-check a matrix that must be SPD. `what` names the
// matrix in error messages.
Mat validated_spd(Mat m, int expect_dim, const char* what) {
    if (m.rows() != m.cols()) {
        throw ContractError(std::string(what) + " must be square");
    }
    if (static_cast<int>(m.rows()) != expect_dim) {
        throw ContractError(std::string(what) +
                            " dimension does not match the mean");
    }
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-12 * scale) {
        throw ContractError(std::string(what) + " is not symmetric");
    }
    m = 0.5 * (m + m.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> eig(m);
    const double max_eig = eig.eigenvalues().maxCoeff();
    const double min_eig = eig.eigenvalues().minCoeff();
    if (!(max_eig > 0.0) || min_eig <= 1e-12 * max_eig) {
        throw ContractError(std::string(what) +
                            " is not positive definite (min eigenvalue " +
                            std::to_string(min_eig) + ")");
    }
    return m;
}

}  // namespace

Gaussian::Gaussian(Vec mean, Mat cov) : mean_(std::move(mean)) {
    if (mean_.size() == 0) {
        throw ContractError("Gaussian mean must be non-empty");
    }
    cov_ = validated_spd(std::move(cov), dim(), "covariance");
}

InformationState::InformationState(Vec y, Mat Y) : y_(std::move(y)) {
    if (y_.size() == 0) {
        throw ContractError("information vector must be non-empty");
    }
    Y_ = validated_spd(std::move(Y), dim(), "information matrix");
}

double gaussian_logpdf(const Gaussian& g, const Vec& x) {
    if (x.size() != g.mean().size()) {
        throw ContractError("gaussian_logpdf: x dimension mismatch");
    }
    const Eigen::LLT<Mat> llt(g.cov());
    const Vec diff = x - g.mean();
    const double maha2 = diff.dot(llt.solve(diff));
    // log det via the Cholesky factor diagonal
    const double log_det =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double d = static_cast<double>(g.dim());
    return -0.5 * (maha2 + log_det + d * std::log(2.0 * std::numbers::pi));
}

InformationState to_information(const Gaussian& g) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(g.cov());
    const double max_eig = eig.eigenvalues().maxCoeff();
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig <= 0.0 || max_eig / min_eig > 1e12) {
        throw SingularityError("to_information: covariance is numerically singular");
    }
    const Eigen::LLT<Mat> llt(g.cov());
    Mat Y = llt.solve(Mat::Identity(g.dim(), g.dim()));
    Vec y = llt.solve(g.mean());
    return InformationState(std::move(y), std::move(Y));
}

Gaussian from_information(const InformationState& s) {
    const Eigen::LLT<Mat> llt(s.Y());
    Mat cov = llt.solve(Mat::Identity(s.dim(), s.dim()));
    Vec mean = llt.solve(s.y());
    return Gaussian(std::move(mean), std::move(cov));
}

}  // namespace gmfuse
