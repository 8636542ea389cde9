#pragma once

// Named body landmarks on the CMU skeleton and the geometric primitives the
// geometric extractors are built from. A landmark is the far end of the ASF
// bone named in landmark_bone().

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

#include "gaitrec/sample.hpp"

namespace gaitrec {

enum class Landmark {
  Root,
  LHip, RHip, LKnee, RKnee, LAnkle, RAnkle, LFoot, RFoot, LToe, RToe,
  Spine, Chest, Thorax, Neck, UpperNeck, Head,
  LShoulder, RShoulder, LElbow, RElbow, LWrist, RWrist, LHand, RHand,
  Count
};

const char* landmark_bone(Landmark l) noexcept;

double angle_between_deg(const Eigen::Vector3d& u, const Eigen::Vector3d& v);
// Interior angle at `b` between b->a and b->c, in degrees.
double interior_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);
double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);
// Fan triangulation from the first vertex.
double polygon_area(std::span<const Eigen::Vector3d> vertices);
Eigen::Vector3d centroid(std::span<const Eigen::Vector3d> vertices);

// Landmark lookup and per-frame body measurements on a JC sample.
class Body {
 public:
  // Throws Error{RepresentationMismatch} if the sample has no joint coordinates
  // or the skeleton lacks one of the landmark bones.
  explicit Body(const GaitSample& sample);

  std::size_t frames() const noexcept { return frames_; }
  Eigen::Vector3d at(std::size_t t, Landmark l) const;
  Eigen::Vector3d joint(std::size_t t, std::size_t joint_index) const;
  std::size_t index(Landmark l) const noexcept { return index_[static_cast<std::size_t>(l)]; }
  const Skeleton& skeleton() const noexcept { return *sample_.skeleton; }

  double distance(std::size_t t, Landmark a, Landmark b) const;
  // Measured length of the bone ending at `joint_index` (distance to parent).
  double bone_length(std::size_t t, std::size_t joint_index) const;
  // Summed measured bone lengths from the root down to `l`.
  double chain_length(std::size_t t, Landmark l) const;
  // Root-to-head chain plus the mean of the two root-to-foot chains.
  double height(std::size_t t) const;
  double foot_distance(std::size_t t) const;

  // Signals over all frames.
  std::vector<double> signal(auto&& per_frame) const {
    std::vector<double> out(frames_);
    for (std::size_t t = 0; t < frames_; ++t) out[t] = per_frame(t);
    return out;
  }
  std::vector<double> height_signal() const;
  std::vector<double> step_signal() const;

  // Maximum foot-to-foot distance over the cycle.
  double step_length() const;
  // Largest foot distance while the left (resp. right) foot is ahead along Z.
  double step_length_leading(bool left) const;
  double stride_length() const;
  double cycle_time() const noexcept { return sample_.duration(); }

 private:
  const GaitSample& sample_;
  std::size_t frames_ = 0;
  std::array<std::size_t, static_cast<std::size_t>(Landmark::Count)> index_{};
};

}  // namespace gaitrec
