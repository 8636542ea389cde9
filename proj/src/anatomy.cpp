#include "gaitrec/anatomy.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaitrec/error.hpp"

namespace gaitrec {

const char* landmark_bone(Landmark l) noexcept {
  switch (l) {
    case Landmark::Root: return "root";
    case Landmark::LHip: return "lhipjoint";
    case Landmark::RHip: return "rhipjoint";
    case Landmark::LKnee: return "lfemur";
    case Landmark::RKnee: return "rfemur";
    case Landmark::LAnkle: return "ltibia";
    case Landmark::RAnkle: return "rtibia";
    case Landmark::LFoot: return "lfoot";
    case Landmark::RFoot: return "rfoot";
    case Landmark::LToe: return "ltoes";
    case Landmark::RToe: return "rtoes";
    case Landmark::Spine: return "lowerback";
    case Landmark::Chest: return "upperback";
    case Landmark::Thorax: return "thorax";
    case Landmark::Neck: return "lowerneck";
    case Landmark::UpperNeck: return "upperneck";
    case Landmark::Head: return "head";
    case Landmark::LShoulder: return "lclavicle";
    case Landmark::RShoulder: return "rclavicle";
    case Landmark::LElbow: return "lhumerus";
    case Landmark::RElbow: return "rhumerus";
    case Landmark::LWrist: return "lradius";
    case Landmark::RWrist: return "rradius";
    case Landmark::LHand: return "lhand";
    case Landmark::RHand: return "rhand";
    case Landmark::Count: break;
  }
  return "";
}

double angle_between_deg(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  // atan2 keeps precision near 0 and 180 degrees.
  return std::atan2(u.cross(v).norm(), u.dot(v)) * 180.0 / std::numbers::pi;
}

double interior_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return angle_between_deg(a - b, c - b);
}

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double polygon_area(std::span<const Eigen::Vector3d> v) {
  double area = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) area += triangle_area(v[0], v[i], v[i + 1]);
  return area;
}

Eigen::Vector3d centroid(std::span<const Eigen::Vector3d> v) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& p : v) c += p;
  return v.empty() ? c : Eigen::Vector3d(c / static_cast<double>(v.size()));
}

Body::Body(const GaitSample& sample) : sample_(sample) {
  if (!sample.has_joints() || !sample.skeleton)
    fail(ErrorCode::RepresentationMismatch, "sample has no joint coordinates");
  if (static_cast<std::size_t>(sample.joints.cols()) != 3 * sample.skeleton->joint_count())
    fail(ErrorCode::RepresentationMismatch, "joint coordinates do not match the skeleton");
  frames_ = static_cast<std::size_t>(sample.joints.rows());
  for (std::size_t l = 0; l < index_.size(); ++l) {
    const char* bone = landmark_bone(static_cast<Landmark>(l));
    int j = sample.skeleton->find(bone);
    if (j < 0) fail(ErrorCode::RepresentationMismatch, std::string("skeleton lacks bone '") + bone + "'");
    index_[l] = static_cast<std::size_t>(j);
  }
}

Eigen::Vector3d Body::joint(std::size_t t, std::size_t j) const {
  return sample_.joints.block<1, 3>(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(3 * j)).transpose();
}

Eigen::Vector3d Body::at(std::size_t t, Landmark l) const { return joint(t, index(l)); }

double Body::distance(std::size_t t, Landmark a, Landmark b) const { return (at(t, a) - at(t, b)).norm(); }

double Body::bone_length(std::size_t t, std::size_t j) const {
  const int p = skeleton().joints[j].parent;
  if (p < 0) return 0.0;
  return (joint(t, j) - joint(t, static_cast<std::size_t>(p))).norm();
}

double Body::chain_length(std::size_t t, Landmark l) const {
  double len = 0;
  for (int j = static_cast<int>(index(l)); j > 0; j = skeleton().joints[static_cast<std::size_t>(j)].parent)
    len += bone_length(t, static_cast<std::size_t>(j));
  return len;
}

double Body::height(std::size_t t) const {
  return chain_length(t, Landmark::Head) +
         0.5 * (chain_length(t, Landmark::LFoot) + chain_length(t, Landmark::RFoot));
}

double Body::foot_distance(std::size_t t) const { return distance(t, Landmark::LFoot, Landmark::RFoot); }

std::vector<double> Body::height_signal() const {
  return signal([this](std::size_t t) { return height(t); });
}

std::vector<double> Body::step_signal() const {
  return signal([this](std::size_t t) { return foot_distance(t); });
}

double Body::step_length() const {
  double best = 0;
  for (std::size_t t = 0; t < frames_; ++t) best = std::max(best, foot_distance(t));
  return best;
}

double Body::step_length_leading(bool left) const {
  double best = 0;
  for (std::size_t t = 0; t < frames_; ++t) {
    const double dz = at(t, Landmark::LFoot).z() - at(t, Landmark::RFoot).z();
    if ((left && dz > 0) || (!left && dz < 0)) best = std::max(best, foot_distance(t));
  }
  return best;
}

double Body::stride_length() const { return step_length_leading(true) + step_length_leading(false); }

}  // namespace gaitrec
