#pragma once

#include <Eigen/Dense>

namespace fkpp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace fkpp
