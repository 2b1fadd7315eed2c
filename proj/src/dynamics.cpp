#include "gmfuse/dynamics.hpp"

#include <algorithm>
#include <utility>

#include "gmfuse/errors.hpp"
#include "gmfuse/rng.hpp"

namespace gmfuse {

LinearDynamics::LinearDynamics(Mat F, Mat Q)
    : F_(std::move(F)), Q_(std::move(Q)) {
    if (F_.rows() != F_.cols()) {
        throw ContractError("F must be square");
    }
    if (Q_.rows() != F_.rows() || Q_.cols() != F_.cols()) {
        throw ContractError("Q dimension must match F");
    }
    const double scale = Q_.cwiseAbs().maxCoeff();
    if ((Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (scale > 0 ? scale : 1.0)) {
        throw ContractError("Q must be symmetric");
    }
    Q_ = 0.5 * (Q_ + Q_.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> eig(Q_);
    if (eig.eigenvalues().minCoeff() < -1e-12 * (scale > 0 ? scale : 1.0)) {
        throw ContractError("Q must be positive semidefinite");
    }
}

Vec propagate_truth(const Vec& x, const LinearDynamics& d, std::uint64_t seed) {
    if (x.size() != d.dim()) {
        throw ContractError("propagate_truth: state dimension mismatch");
    }
    Vec next = d.F() * x;
    if (d.Q().cwiseAbs().maxCoeff() > 0.0) {
        // PSD square root via eigendecomposition; Q may be rank-deficient
        Eigen::SelfAdjointEigenSolver<Mat> eig(d.Q());
        Vec sqrt_vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        Rng rng(seed);
        next += eig.eigenvectors() * sqrt_vals.asDiagonal() *
                rng.normal_vector(d.dim());
    }
    return next;
}

Gaussian predict_gaussian(const Gaussian& prior, const LinearDynamics& d) {
    if (prior.dim() != d.dim()) {
        throw ContractError("predict: state dimension mismatch");
    }
    Vec mean = d.F() * prior.mean();
    Mat cov = d.F() * prior.cov() * d.F().transpose() + d.Q();
    cov = 0.5 * (cov + cov.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
    if (eig.eigenvalues().minCoeff() <=
        1e-12 * std::max(eig.eigenvalues().maxCoeff(), 0.0)) {
        throw SingularityError("predict: predicted covariance is singular");
    }
    return Gaussian(std::move(mean), std::move(cov));
}

InformationState predict_information(const InformationState& prev,
                                     const LinearDynamics& d) {
    const Gaussian predicted = predict_gaussian(from_information(prev), d);
    return to_information(predicted);
}

}  // namespace gmfuse
