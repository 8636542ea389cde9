#include "gaitrec/sample.hpp"

#include <cmath>

#include "gaitrec/error.hpp"
#include "gaitrec/kinematics.hpp"

namespace gaitrec {

GaitSample make_sample(const MotionSequence& motion, std::shared_ptr<const Skeleton> skeleton,
                       std::string label) {
  GaitSample s;
  s.label = std::move(label);
  s.layout = motion.layout;
  s.rotations = motion.values;
  s.joints = forward_kinematics(motion, *skeleton).positions;
  s.skeleton = std::move(skeleton);
  s.frame_rate = motion.frame_rate;
  return s;
}

Eigen::MatrixXd resample_rows(const Eigen::MatrixXd& m, std::size_t target) {
  if (target < 2) fail(ErrorCode::InvalidArgument, "resample: target length must be at least 2");
  const auto T = static_cast<std::size_t>(m.rows());
  if (T == 0) fail(ErrorCode::DegenerateSample, "resample: empty sample");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(target), m.cols());
  if (T == 1) {
    out.rowwise() = m.row(0);
    return out;
  }
  if (T == target) return m;
  const double scale = static_cast<double>(T - 1) / static_cast<double>(target - 1);
  for (std::size_t i = 0; i < target; ++i) {
    const double pos = static_cast<double>(i) * scale;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= T - 1) lo = T - 2;
    const double w = pos - static_cast<double>(lo);
    out.row(static_cast<Eigen::Index>(i)) =
        (1.0 - w) * m.row(static_cast<Eigen::Index>(lo)) + w * m.row(static_cast<Eigen::Index>(lo + 1));
  }
  out.row(0) = m.row(0);
  out.row(static_cast<Eigen::Index>(target - 1)) = m.row(static_cast<Eigen::Index>(T - 1));
  return out;
}

GaitSample resample_linear(const GaitSample& sample, std::size_t target) {
  if (target < 2) fail(ErrorCode::InvalidArgument, "resample: target length must be at least 2");
  GaitSample out = sample;
  const std::size_t T = sample.frame_count();
  if (T == target) return out;
  if (sample.has_rotations()) out.rotations = resample_rows(sample.rotations, target);
  if (sample.has_joints()) out.joints = resample_rows(sample.joints, target);
  if (T > 1) out.frame_rate = sample.frame_rate * static_cast<double>(target - 1) / static_cast<double>(T - 1);
  return out;
}

}  // namespace gaitrec
