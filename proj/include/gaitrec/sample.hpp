#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

#include "gaitrec/motion.hpp"
#include "gaitrec/skeleton.hpp"

namespace gaitrec {

// One gait cycle. Either representation may be empty: `rotations` holds the
// bone-rotation (BR) channels, `joints` the joint coordinates (JC) obtained by
// forward kinematics on the prototypical skeleton.
struct GaitSample {
  std::string label;
  ChannelLayout layout;        // columns of `rotations`
  Eigen::MatrixXd rotations;   // frames x channels
  Eigen::MatrixXd joints;      // frames x 3J, root at the origin
  std::shared_ptr<const Skeleton> skeleton;
  double frame_rate = 120.0;

  bool has_rotations() const noexcept { return rotations.size() > 0; }
  bool has_joints() const noexcept { return joints.size() > 0; }
  std::size_t frame_count() const noexcept {
    return static_cast<std::size_t>(has_joints() ? joints.rows() : rotations.rows());
  }
  // Time between the first and last frame, in seconds.
  double duration() const noexcept {
    return frame_count() > 1 ? static_cast<double>(frame_count() - 1) / frame_rate : 0.0;
  }
};

// Builds both representations. The motion should already be root-normalized.
GaitSample make_sample(const MotionSequence& motion, std::shared_ptr<const Skeleton> skeleton,
                       std::string label);

// Linear interpolation of each column onto `target` evenly spaced points of the
// original time grid; first and last rows are preserved.
Eigen::MatrixXd resample_rows(const Eigen::MatrixXd& m, std::size_t target);

// Resamples whichever representations are present. The frame rate is scaled so
// duration() is unchanged. Throws Error{InvalidArgument} for target < 2.
GaitSample resample_linear(const GaitSample& sample, std::size_t target);

}  // namespace gaitrec
