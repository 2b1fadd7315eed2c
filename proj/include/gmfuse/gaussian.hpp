#pragma once

#include "gmfuse/types.hpp"

namespace gmfuse {

/// Multivariate Gaussian in moment form. Construction symmetrizes the
/// covariance as (P + P^T)/2 and rejects matrices that are asymmetric
/// beyond 1e-12 relative tolerance or whose smallest eigenvalue is
/// <= 1e-12 times the largest. Immutable after construction.
class Gaussian {
public:
    Gaussian(Vec mean, Mat cov);

    const Vec& mean() const { return mean_; }
    const Mat& cov() const { return cov_; }
    int dim() const { return static_cast<int>(mean_.size()); }

private:
    Vec mean_;
    Mat cov_;
};

/// Information form of a Gaussian: Y = P^-1, y = P^-1 mu.
/// Same construction-time validation as Gaussian applies to Y.
class InformationState {
public:
    InformationState(Vec y, Mat Y);

    const Vec& y() const { return y_; }
    const Mat& Y() const { return Y_; }
    int dim() const { return static_cast<int>(y_.size()); }

private:
    Vec y_;
    Mat Y_;
};

/// Natural-log density of g at x.
double gaussian_logpdf(const Gaussian& g, const Vec& x);

/// Moment form -> information form. Throws SingularityError if the
/// covariance condition estimate exceeds 1e12.
InformationState to_information(const Gaussian& g);

/// Information form -> moment form.
Gaussian from_information(const InformationState& s);

}  // namespace gmfuse
