#pragma once

#include <Eigen/Core>

namespace maflow {

using Scalar = double;

using Vec2 = Eigen::Vector2d;
using VecX = Eigen::VectorXd;
using ArrX = Eigen::ArrayXd;
using ArrXX = Eigen::ArrayXXd;
using MaskXX = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

} // namespace maflow
