#pragma once

#include <cstdint>

#include "gmfuse/gaussian.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

/// Linear stochastic dynamics x' = F x + w, w ~ N(0, Q). Q must be
/// symmetric positive semidefinite and dimension-consistent with F.
class LinearDynamics {
public:
    LinearDynamics(Mat F, Mat Q);

    const Mat& F() const { return F_; }
    const Mat& Q() const { return Q_; }
    int dim() const { return static_cast<int>(F_.rows()); }

private:
    Mat F_;
    Mat Q_;
};

/// One noisy step of the truth: F x + w, deterministic per seed.
/// Q = 0 gives exactly F x.
Vec propagate_truth(const Vec& x, const LinearDynamics& d, std::uint64_t seed);

/// Information-form prediction. Computed by converting to moment form,
/// predicting mu' = F mu, P' = F P F^T + Q, and converting back, so the
/// result matches the covariance-form filter exactly.
InformationState predict_information(const InformationState& prev,
                                     const LinearDynamics& d);

/// Moment-form prediction used by episode orchestration.
Gaussian predict_gaussian(const Gaussian& prior, const LinearDynamics& d);

}  // namespace gmfuse
