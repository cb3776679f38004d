#pragma once

#include <Eigen/Dense>

namespace formation {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Diagonal gain matrices are stored by their diagonal; x, y, z order.
using DiagGain = Eigen::Vector3d;

inline constexpr double kGravity = 9.81;  // m/s^2

inline constexpr char kAxisNames[3] = {'x', 'y', 'z'};

}  // namespace formation
