#pragma once

#include <span>

namespace gmfuse {

/// log(sum_i exp(terms[i])) with max subtraction. Returns -inf for an
/// empty span or when every term is -inf.
double log_sum_exp(std::span<const double> terms);

}  // namespace gmfuse
