#pragma once

#include <Eigen/Dense>

namespace gmfuse {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace gmfuse
