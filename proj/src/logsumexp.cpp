#include "gmfuse/logsumexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmfuse {

double log_sum_exp(std::span<const double> terms) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    if (terms.empty()) {
        return neg_inf;
    }
    const double m = *std::max_element(terms.begin(), terms.end());
    if (m == neg_inf) {
        return neg_inf;
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += std::exp(t - m);
    }
    return m + std::log(acc);
}

}  // namespace gmfuse
