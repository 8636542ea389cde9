#pragma once

// Discriminant subspace learning: maximum margin criterion (MMC) and PCA
// followed by LDA, plus the Mahalanobis comparison of learned templates.

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gaitrec {

// Learning samples as columns; labels[n] names the class of column n.
struct LabeledDataset {
  Eigen::MatrixXd samples;  // D x N
  std::vector<std::string> labels;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(samples.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(samples.cols()); }
};

// Class partition in order of first appearance.
struct ClassIndex {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> members;
};
ClassIndex index_classes(const std::vector<std::string>& labels);

// Dense scatter matrices; only practical for moderate D.
//   between = sum_c (mu_c - mu)(mu_c - mu)^T
//   within  = sum_c 1/N_c sum_{n in c} (g_n - mu_c)(g_n - mu_c)^T
//   total   = between + within
struct ScatterSet {
  Eigen::VectorXd mean;
  Eigen::MatrixXd class_means;  // D x C
  std::vector<std::string> classes;
  Eigen::MatrixXd between;
  Eigen::MatrixXd within;
  Eigen::MatrixXd total;
};

// Throws Error{TooFewClasses} (fewer than two classes) or
// Error{DimensionMismatch} (label count differs from sample count).
ScatterSet compute_scatter(const LabeledDataset& data);

enum class TransformSource { MMC, PCALDA, Identity };

struct LinearTransform {
  TransformSource source = TransformSource::Identity;
  Eigen::MatrixXd phi;          // D x D~
  Eigen::VectorXd eigenvalues;  // retained Delta (MMC) or LDA eigenvalues, non-increasing

  std::size_t input_dimension() const noexcept { return static_cast<std::size_t>(phi.rows()); }
  std::size_t output_dimension() const noexcept { return static_cast<std::size_t>(phi.cols()); }
};

// Relative cutoff below which singular values of the centred data count as zero.
inline constexpr double kSpectrumCutoff = 1e-8;
// MMC keeps directions whose whitened between-class eigenvalue is at least this.
inline constexpr double kMmcRetention = 0.5;
// Within-class regularization for LDA, relative to trace / dim.
inline constexpr double kWithinRegularization = 1e-6;

// Throws Error{TooFewClasses}, Error{DegenerateScatter} (no positive spectrum).
LinearTransform learn_mmc(const LabeledDataset& data);
// Throws Error{TooFewClasses}, Error{SingularWithinScatter}.
LinearTransform learn_pcalda(const LabeledDataset& data);
// Phi^T x. Throws Error{DimensionMismatch}.
Eigen::VectorXd apply_transform(const LinearTransform& t, const Eigen::VectorXd& sample);
Eigen::MatrixXd apply_transform(const LinearTransform& t, const Eigen::MatrixXd& samples);

// Flips each column so its largest-magnitude entry is positive.
void normalize_signs(Eigen::MatrixXd& columns);

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& s);

// sqrt((a-b)^T S+ (a-b)). Throws Error{DimensionMismatch}.
double mahalanobis_distance(const Eigen::MatrixXd& covariance_pinv, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b);

// Transform plus the pseudo-inverted population covariance of the learning
// templates in feature space.
struct MahalanobisModel {
  LinearTransform transform;
  Eigen::MatrixXd covariance_pinv;

  static MahalanobisModel fit(LinearTransform t, const Eigen::MatrixXd& learning_samples);
  Eigen::VectorXd project(const Eigen::VectorXd& sample) const { return apply_transform(transform, sample); }
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return mahalanobis_distance(covariance_pinv, a, b);
  }
};

}  // namespace gaitrec
