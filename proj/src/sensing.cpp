#include "gmfuse/sensing.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "gmfuse/errors.hpp"
#include "gmfuse/rng.hpp"

namespace gmfuse {

namespace {
constexpr double kGeometryEps = 1e-9;  // meters

Vec position_block(const Vec& state, const RangeSensor& sensor) {
    if (state.size() < sensor.position_dim()) {
        throw ContractError("state dimension smaller than sensor position");
    }
    return state.head(sensor.position_dim());
}
}  // namespace

RangeSensor::RangeSensor(Vec position, double noise_var)
    : position_(std::move(position)), noise_var_(noise_var) {
    if (position_.size() < 2 || position_.size() > 3) {
        throw ContractError("sensor position must be 2-D or 3-D");
    }
    if (!(noise_var_ > 0.0)) {
        throw ContractError("sensor noise variance must be positive");
    }
}

InfoDelta& InfoDelta::operator+=(const InfoDelta& other) {
    di += other.di;
    dI += other.dI;
    log_lik += other.log_lik;
    return *this;
}

double predicted_range(const Vec& state, const RangeSensor& sensor) {
    return (position_block(state, sensor) - sensor.position()).norm();
}

double measure_range(const Vec& truth, const RangeSensor& sensor,
                     std::uint64_t seed) {
    const double range = predicted_range(truth, sensor);
    if (range <= kGeometryEps) {
        throw SingularityError("measure_range: target at the sensor position");
    }
    Rng rng(seed);
    return range + std::sqrt(sensor.noise_var()) * rng.normal();
}

Mat range_jacobian(const Vec& mu_pred, const RangeSensor& sensor) {
    const Vec offset = position_block(mu_pred, sensor) - sensor.position();
    const double range = offset.norm();
    if (range <= kGeometryEps) {
        throw SingularityError("range_jacobian: degenerate geometry");
    }
    Mat H = Mat::Zero(1, mu_pred.size());
    H.block(0, 0, 1, sensor.position_dim()) = (offset / range).transpose();
    return H;
}

InfoDelta information_update(double z, double predicted, const Mat& H,
                             const Vec& mu_pred, double noise_var,
                             LinearizationMode mode) {
    const double r_inv = 1.0 / noise_var;
    const double z_eff = mode == LinearizationMode::ekf
                             ? z - predicted + (H * mu_pred)(0)
                             : z;
    InfoDelta delta;
    delta.di = H.transpose() * (r_inv * z_eff);
    delta.dI = H.transpose() * r_inv * H;
    return delta;
}

InfoDelta info_contribution(double z, const Vec& mu_pred,
                            const RangeSensor& sensor,
                            LinearizationMode mode) {
    const Mat H = range_jacobian(mu_pred, sensor);
    return information_update(z, predicted_range(mu_pred, sensor), H, mu_pred,
                              sensor.noise_var(), mode);
}

double measurement_loglik(double z, const Vec& x_eval,
                          const RangeSensor& sensor) {
    const double range = predicted_range(x_eval, sensor);
    if (range <= kGeometryEps) {
        throw SingularityError("measurement_loglik: degenerate geometry");
    }
    const double resid = z - range;
    return -0.5 * (resid * resid / sensor.noise_var() +
                   std::log(2.0 * std::numbers::pi * sensor.noise_var()));
}

}  // namespace gmfuse
