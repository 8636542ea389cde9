#pragma once

// A gait-recognition method ready to produce and compare templates: a
// registry entry plus whatever state was learned from the learning samples.

#include <optional>
#include <span>
#include <string_view>

#include "gaitrec/features.hpp"
#include "gaitrec/learning.hpp"
#include "gaitrec/sample.hpp"
#include "gaitrec/template.hpp"

namespace gaitrec {

struct MethodOptions {
  FeatureOptions features;
  std::size_t raw_frames = 150;
};

class MethodModel {
 public:
  // Learned methods resample every learning sample to the rounded average
  // frame count, flatten, learn the transform and the feature-space
  // covariance. Other methods ignore the learning samples.
  // Throws Error{UnknownMethod}, learning errors, Error{DimensionMismatch}.
  static MethodModel fit(std::string_view method_id, std::span<const GaitSample> learning,
                         const MethodOptions& options = {});
  // Rebuilds a model from persisted state.
  static MethodModel restore(std::string_view method_id, std::size_t target_frames,
                             std::optional<MahalanobisModel> learned, const MethodOptions& options = {});

  const MethodDescriptor& descriptor() const noexcept { return *descriptor_; }
  const std::string& id() const noexcept { return descriptor_->id; }
  bool is_random() const noexcept { return descriptor_->kind == MethodKind::Random; }
  std::size_t target_frames() const noexcept { return target_frames_; }
  const std::optional<MahalanobisModel>& learned() const noexcept { return learned_; }
  const MethodOptions& options() const noexcept { return options_; }

  // Random yields an empty template.
  Template extract(const GaitSample& sample) const;
  // Throws Error{LayoutMismatch} or Error{DimensionMismatch}; Random has no
  // distance and throws Error{InvalidArgument}.
  double distance(const Template& a, const Template& b) const;

 private:
  const MethodDescriptor* descriptor_ = nullptr;
  std::size_t target_frames_ = 0;
  std::optional<MahalanobisModel> learned_;
  MethodOptions options_;
};

// Raw representation matrix of a sample, BR rotations or JC coordinates.
const Eigen::MatrixXd& representation_of(const GaitSample& sample, Representation r);

}  // namespace gaitrec
