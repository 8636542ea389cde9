#pragma once

// AMC motions: per-frame channel values bound to a skeleton's dof layout.

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "gaitrec/skeleton.hpp"

namespace gaitrec {

struct ChannelGroup {
  std::string joint;
  std::size_t joint_index = 0;
  std::vector<Channel> dof;
  std::size_t offset = 0;  // first column in MotionSequence::values

  bool operator==(const ChannelGroup&) const = default;
};

// Column layout of a motion: one group per dof-bearing joint, in skeleton order.
struct ChannelLayout {
  std::vector<ChannelGroup> groups;
  std::size_t width = 0;

  static ChannelLayout from(const Skeleton& skeleton);
  const ChannelGroup* find(std::string_view joint) const noexcept;
  bool operator==(const ChannelLayout&) const = default;
};

struct MotionSequence {
  ChannelLayout layout;
  Eigen::MatrixXd values;  // frames x layout.width
  bool degrees = true;
  double frame_rate = 120.0;
  std::string subject_id;
  std::string source_file;

  std::size_t frame_count() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

// Throws Error{MalformedAmc}.
MotionSequence parse_amc(std::string_view text, const Skeleton& skeleton);
MotionSequence load_amc(const std::string& path, const Skeleton& skeleton);
// Values printed fixed-point with six decimals, trailing zeros trimmed.
std::string write_amc(const MotionSequence& motion);

// Zeroes every root channel (translation and rotation) in every frame.
MotionSequence normalize_root(const MotionSequence& motion);

// Contiguous frame window [first, first + count).
MotionSequence slice_frames(const MotionSequence& motion, std::size_t first, std::size_t count);

// "<subject>_<anything>.amc" -> "<subject>".
std::string subject_from_filename(std::string_view filename);

bool approx_equal(const MotionSequence& a, const MotionSequence& b, double tol);

}  // namespace gaitrec
