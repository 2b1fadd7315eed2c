#pragma once

#include <cstdint>

#include "gmfuse/types.hpp"

namespace gmfuse {

/// Range sensor: z = ||pos(x) - position|| + v, v ~ N(0, noise_var).
/// The position block is the leading `position.size()` entries of the
/// state vector; remaining entries (velocities, ...) are unobserved.
class RangeSensor {
public:
    RangeSensor(Vec position, double noise_var);

    const Vec& position() const { return position_; }
    double noise_var() const { return noise_var_; }
    int position_dim() const { return static_cast<int>(position_.size()); }

private:
    Vec position_;
    double noise_var_;
};

/// Per-agent consensus payload for one mixture component: information
/// vector increment, information matrix increment, and the agent's local
/// log measurement likelihood.
struct InfoDelta {
    Vec di;
    Mat dI;
    double log_lik = 0.0;

    InfoDelta& operator+=(const InfoDelta& other);
    friend InfoDelta operator+(InfoDelta a, const InfoDelta& b) {
        a += b;
        return a;
    }
};

/// Which effective measurement feeds the information vector increment.
///   ekf      di = H^T R^-1 (z - h(mu) + H mu); identical to the
///            covariance-form EKF update for nonlinear h (default)
///   literal  di = H^T R^-1 z; exact only for linear h
enum class LinearizationMode { ekf, literal };

/// Noisy range measurement of the truth, deterministic per seed.
double measure_range(const Vec& truth, const RangeSensor& sensor,
                     std::uint64_t seed);

/// Range without noise.
double predicted_range(const Vec& state, const RangeSensor& sensor);

/// 1 x n_x measurement Jacobian at the predicted mean: unit direction
/// vector in the position block, zero elsewhere. Throws SingularityError
/// when the predicted position is within 1e-9 m of the sensor.
Mat range_jacobian(const Vec& mu_pred, const RangeSensor& sensor);

/// Information increments for a scalar measurement with an explicit
/// Jacobian; `predicted` is h(mu_pred). log_lik is left at zero.
InfoDelta information_update(double z, double predicted, const Mat& H,
                             const Vec& mu_pred, double noise_var,
                             LinearizationMode mode);

/// Information increments for one range measurement (log_lik left at zero;
/// set separately via measurement_loglik).
InfoDelta info_contribution(double z, const Vec& mu_pred,
                            const RangeSensor& sensor, LinearizationMode mode);

/// ln N(z; h(x_eval), R).
double measurement_loglik(double z, const Vec& x_eval,
                          const RangeSensor& sensor);

}  // namespace gmfuse
