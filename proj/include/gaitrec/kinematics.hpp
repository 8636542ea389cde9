#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <string_view>

#include "gaitrec/motion.hpp"
#include "gaitrec/skeleton.hpp"

namespace gaitrec {

// Joint positions per frame. Row t holds [x y z] of joint 0, then joint 1, ...
// (the flattening used for learning samples).
struct JointCoordinateSequence {
  Eigen::MatrixXd positions;  // frames x 3J

  std::size_t frame_count() const noexcept { return static_cast<std::size_t>(positions.rows()); }
  std::size_t joint_count() const noexcept { return static_cast<std::size_t>(positions.cols() / 3); }
  Eigen::Vector3d at(std::size_t frame, std::size_t joint) const {
    return positions.block<1, 3>(static_cast<Eigen::Index>(frame), static_cast<Eigen::Index>(3 * joint)).transpose();
  }
};

// Rotation for Euler angles (radians) applied in `order`, e.g. "XYZ" = X first.
Eigen::Matrix3d euler_matrix(const Eigen::Vector3d& angles, std::string_view order);

// Throws Error{UnboundMotion} if the motion's layout does not match the skeleton.
JointCoordinateSequence forward_kinematics(const MotionSequence& motion, const Skeleton& skeleton);

}  // namespace gaitrec
