#include "gaitrec/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "gaitrec/error.hpp"

namespace gaitrec {

Eigen::Matrix3d euler_matrix(const Eigen::Vector3d& angles, std::string_view order) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (char axis : order) {
    switch (axis) {
      case 'X': case 'x':
        r = Eigen::AngleAxisd(angles.x(), Eigen::Vector3d::UnitX()).toRotationMatrix() * r;
        break;
      case 'Y': case 'y':
        r = Eigen::AngleAxisd(angles.y(), Eigen::Vector3d::UnitY()).toRotationMatrix() * r;
        break;
      case 'Z': case 'z':
        r = Eigen::AngleAxisd(angles.z(), Eigen::Vector3d::UnitZ()).toRotationMatrix() * r;
        break;
      default:
        break;
    }
  }
  return r;
}

JointCoordinateSequence forward_kinematics(const MotionSequence& motion, const Skeleton& skeleton) {
  if (!(motion.layout == ChannelLayout::from(skeleton)))
    fail(ErrorCode::UnboundMotion, "forward_kinematics: motion is not bound to this skeleton");
  if (skeleton.joints.empty()) fail(ErrorCode::UnboundMotion, "forward_kinematics: empty skeleton");

  const std::size_t J = skeleton.joint_count();
  const double axis_scale = skeleton.units.degrees ? std::numbers::pi / 180.0 : 1.0;
  const double value_scale = motion.degrees ? std::numbers::pi / 180.0 : 1.0;

  // Local axis frames are constant per joint.
  std::vector<Eigen::Matrix3d> frame(J), frame_inv(J);
  std::vector<const ChannelGroup*> group(J, nullptr);
  for (std::size_t j = 0; j < J; ++j) {
    const auto& joint = skeleton.joints[j];
    frame[j] = euler_matrix(joint.axis * axis_scale, joint.axis_order);
    frame_inv[j] = frame[j].transpose();
  }
  for (const auto& g : motion.layout.groups) group[g.joint_index] = &g;

  JointCoordinateSequence out;
  out.positions.resize(motion.values.rows(), static_cast<Eigen::Index>(3 * J));
  std::vector<Eigen::Matrix3d> global(J);
  std::vector<Eigen::Vector3d> pos(J);

  for (Eigen::Index t = 0; t < motion.values.rows(); ++t) {
    for (std::size_t j = 0; j < J; ++j) {
      const auto& joint = skeleton.joints[j];
      Eigen::Vector3d rot = Eigen::Vector3d::Zero();
      Eigen::Vector3d trans = Eigen::Vector3d::Zero();
      if (const ChannelGroup* g = group[j]) {
        for (std::size_t k = 0; k < g->dof.size(); ++k) {
          double v = motion.values(t, static_cast<Eigen::Index>(g->offset + k));
          switch (g->dof[k]) {
            case Channel::TX: trans.x() = v; break;
            case Channel::TY: trans.y() = v; break;
            case Channel::TZ: trans.z() = v; break;
            case Channel::RX: rot.x() = v * value_scale; break;
            case Channel::RY: rot.y() = v * value_scale; break;
            case Channel::RZ: rot.z() = v * value_scale; break;
          }
        }
      }
      Eigen::Matrix3d local = frame[j] * euler_matrix(rot, joint.axis_order) * frame_inv[j];
      if (joint.parent < 0) {
        global[j] = local;
        pos[j] = skeleton.root_position + trans;
      } else {
        const auto p = static_cast<std::size_t>(joint.parent);
        global[j] = global[p] * local;
        pos[j] = pos[p] + joint.length * (global[j] * joint.direction);
      }
      out.positions.block<1, 3>(t, static_cast<Eigen::Index>(3 * j)) = pos[j].transpose();
    }
  }
  return out;
}

}  // namespace gaitrec
