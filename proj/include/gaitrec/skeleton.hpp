#pragma once

// ASF skeletons: parsing, writing and the prototypical (mean) skeleton.

#include <Eigen/Core>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gaitrec {

enum class Channel { TX, TY, TZ, RX, RY, RZ };

const char* channel_name(Channel c) noexcept;
bool is_rotation(Channel c) noexcept;

struct Units {
  double mass = 1.0;
  double length = 1.0;
  bool degrees = true;

  bool operator==(const Units&) const = default;
};

// One ASF bone. The joint position it defines is the bone's far end; the root
// joint has no bone (zero direction and length).
struct Joint {
  std::string name;
  int parent = -1;
  int id = 0;
  Eigen::Vector3d direction = Eigen::Vector3d::Zero();
  double length = 0.0;
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();  // in the skeleton's angle unit
  std::string axis_order = "XYZ";
  std::vector<Channel> dof;
};

struct Skeleton {
  std::string version = "1.10";
  std::string name = "VICON";
  Units units;
  Eigen::Vector3d root_position = Eigen::Vector3d::Zero();
  // joints[0] is the root; parents always precede their children.
  std::vector<Joint> joints;

  std::size_t joint_count() const noexcept { return joints.size(); }
  std::size_t bone_count() const noexcept { return joints.empty() ? 0 : joints.size() - 1; }
  // Index of the named joint or -1.
  int find(std::string_view name) const noexcept;
  const Joint& root() const { return joints.front(); }
};

// Throws Error{MalformedAsf}.
Skeleton parse_asf(std::string_view text);
std::string write_asf(const Skeleton& skeleton);
Skeleton load_asf(const std::string& path);

// Throws Error{HeterogeneousTopology} when joint names, parents or dof differ.
Skeleton mean_skeleton(std::span<const Skeleton> skeletons);

bool same_topology(const Skeleton& a, const Skeleton& b) noexcept;

}  // namespace gaitrec
