#pragma once

#include <vector>

#include "gmfuse/mixture.hpp"
#include "gmfuse/sensing.hpp"
#include "gmfuse/types.hpp"

namespace gmfuse {

/// Centralized fusion reference. Implemented in covariance form with a
/// batch Kalman update per component, deliberately sharing no code with
/// the information-form consensus path it is used to check.
struct CentralizedResult {
    GaussianMixture posterior;
    Vec log_component_likelihoods;
};

CentralizedResult fuse_centralized(
    const GaussianMixture& prior, const std::vector<double>& observations,
    const std::vector<RangeSensor>& sensors,
    LinearizationMode mode = LinearizationMode::ekf);

/// Weight update from prior/posterior density ratios at an arbitrary
/// evaluation point x_c. Throws ConditioningError when any prior or
/// posterior component's log density at x_c falls below -700.
Vec weight_update_at_point(const GaussianMixture& prior,
                           const GaussianMixture& posterior, const Vec& x_c);

}  // namespace gmfuse
