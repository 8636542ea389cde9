#include "gaitrec/method.hpp"

#include <cmath>

#include "gaitrec/error.hpp"

namespace gaitrec {

const Eigen::MatrixXd& representation_of(const GaitSample& sample, Representation r) {
  if (r == Representation::BR) {
    if (!sample.has_rotations()) fail(ErrorCode::RepresentationMismatch, "sample has no bone rotations");
    return sample.rotations;
  }
  if (r == Representation::JC) {
    if (!sample.has_joints()) fail(ErrorCode::RepresentationMismatch, "sample has no joint coordinates");
    return sample.joints;
  }
  fail(ErrorCode::InvalidArgument, "representation must be BR or JC");
}

MethodModel MethodModel::fit(std::string_view method_id, std::span<const GaitSample> learning,
                             const MethodOptions& options) {
  MethodModel m;
  m.descriptor_ = &find_method(method_id);
  m.options_ = options;
  const MethodDescriptor& d = *m.descriptor_;
  if (d.kind == MethodKind::Raw) m.target_frames_ = options.raw_frames;
  if (d.kind != MethodKind::Learned) return m;

  if (learning.empty()) fail(ErrorCode::TooFewClasses, "no learning samples for '" + d.id + "'");
  double frames = 0;
  for (const auto& s : learning) frames += static_cast<double>(representation_of(s, d.representation).rows());
  m.target_frames_ = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(frames / learning.size())));

  const auto width = representation_of(learning.front(), d.representation).cols();
  LabeledDataset data;
  data.samples.resize(width * static_cast<Eigen::Index>(m.target_frames_), static_cast<Eigen::Index>(learning.size()));
  data.labels.reserve(learning.size());
  for (std::size_t n = 0; n < learning.size(); ++n) {
    const Eigen::MatrixXd& r = representation_of(learning[n], d.representation);
    if (r.cols() != width) fail(ErrorCode::DimensionMismatch, "learning samples differ in channel count");
    data.samples.col(static_cast<Eigen::Index>(n)) = flatten(resample_rows(r, m.target_frames_));
    data.labels.push_back(learning[n].label);
  }
  LinearTransform t = d.id.starts_with("mmc") ? learn_mmc(data) : learn_pcalda(data);
  m.learned_ = MahalanobisModel::fit(std::move(t), data.samples);
  return m;
}

MethodModel MethodModel::restore(std::string_view method_id, std::size_t target_frames,
                                 std::optional<MahalanobisModel> learned, const MethodOptions& options) {
  MethodModel m;
  m.descriptor_ = &find_method(method_id);
  m.options_ = options;
  m.target_frames_ = target_frames;
  m.learned_ = std::move(learned);
  if (m.descriptor_->kind == MethodKind::Learned && (!m.learned_ || target_frames < 2))
    fail(ErrorCode::MalformedFile, "learned method '" + m.descriptor_->id + "' lacks its transform");
  return m;
}

Template MethodModel::extract(const GaitSample& sample) const {
  const MethodDescriptor& d = *descriptor_;
  switch (d.kind) {
    case MethodKind::Geometric:
      return extract_geometric_features(d.id, sample, options_.features);
    case MethodKind::Raw:
      return raw_template(sample, d.representation, target_frames_);
    case MethodKind::Learned: {
      const Eigen::MatrixXd& r = representation_of(sample, d.representation);
      Template t;
      t.method_id = d.id;
      t.label = sample.label;
      t.values = learned_->project(flatten(resample_rows(r, target_frames_)));
      return t;
    }
    case MethodKind::Random:
      break;
  }
  Template t;
  t.method_id = d.id;
  t.label = sample.label;
  return t;
}

double MethodModel::distance(const Template& a, const Template& b) const {
  const MethodDescriptor& d = *descriptor_;
  if (d.kind == MethodKind::Random) fail(ErrorCode::InvalidArgument, "the random baseline has no distance");
  if (a.method_id != d.id || b.method_id != d.id)
    fail(ErrorCode::LayoutMismatch, "template does not belong to method '" + d.id + "'");
  if (d.kind == MethodKind::Learned) return learned_->distance(a.values, b.values);
  return template_distance(d, a, b);
}

}  // namespace gaitrec
