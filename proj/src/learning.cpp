#include "gaitrec/learning.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "gaitrec/error.hpp"

namespace gaitrec {

namespace {

void validate(const LabeledDataset& data, const ClassIndex& classes) {
  if (data.labels.size() != data.size())
    fail(ErrorCode::DimensionMismatch, "dataset has " + std::to_string(data.size()) + " samples but " +
                                           std::to_string(data.labels.size()) + " labels");
  if (classes.names.size() < 2)
    fail(ErrorCode::TooFewClasses, "learning needs at least two classes, got " + std::to_string(classes.names.size()));
  if (!data.samples.allFinite()) fail(ErrorCode::InvalidArgument, "learning samples contain non-finite values");
}

struct Centred {
  Eigen::VectorXd mean;
  Eigen::MatrixXd class_means;  // D x C
  Eigen::MatrixXd upsilon;      // columns mu_c - mu
  Eigen::MatrixXd within;       // columns (g_n - mu_c) / sqrt(N_c), so within * within^T = Sigma_w
};

Centred centre(const LabeledDataset& data, const ClassIndex& classes) {
  const auto D = data.samples.rows();
  const auto C = static_cast<Eigen::Index>(classes.names.size());
  Centred out;
  out.mean = data.samples.rowwise().mean();
  out.class_means.resize(D, C);
  out.within.resize(D, data.samples.cols());
  Eigen::Index col = 0;
  for (Eigen::Index c = 0; c < C; ++c) {
    const auto& members = classes.members[static_cast<std::size_t>(c)];
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(D);
    for (std::size_t n : members) mu += data.samples.col(static_cast<Eigen::Index>(n));
    mu /= static_cast<double>(members.size());
    out.class_means.col(c) = mu;
    const double scale = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (std::size_t n : members) out.within.col(col++) = (data.samples.col(static_cast<Eigen::Index>(n)) - mu) * scale;
  }
  out.upsilon = out.class_means.colwise() - out.mean;
  return out;
}

// Columns sorted by descending key; stable so equal keys keep their order.
std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& keys) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(keys.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] > keys[b]; });
  return order;
}

}  // namespace

ClassIndex index_classes(const std::vector<std::string>& labels) {
  ClassIndex out;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    auto [it, fresh] = slot.try_emplace(labels[n], out.names.size());
    if (fresh) {
      out.names.push_back(labels[n]);
      out.members.emplace_back();
    }
    out.members[it->second].push_back(n);
  }
  return out;
}

ScatterSet compute_scatter(const LabeledDataset& data) {
  const ClassIndex classes = index_classes(data.labels);
  validate(data, classes);
  const Centred c = centre(data, classes);
  ScatterSet s;
  s.mean = c.mean;
  s.class_means = c.class_means;
  s.classes = classes.names;
  s.between = c.upsilon * c.upsilon.transpose();
  s.within = c.within * c.within.transpose();
  s.total = s.between + s.within;
  return s;
}

void normalize_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Eigen::Index arg = 0;
    columns.col(j).cwiseAbs().maxCoeff(&arg);
    if (columns(arg, j) < 0) columns.col(j) *= -1.0;
  }
}

LinearTransform learn_mmc(const LabeledDataset& data) {
  const ClassIndex classes = index_classes(data.labels);
  validate(data, classes);
  const Centred c = centre(data, classes);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(data.size()));
  const Eigen::MatrixXd X = (data.samples.colwise() - c.mean) * inv_sqrt_n;

  // Eigenpairs of the total scatter X X^T from the thin SVD of X.
  Eigen::BDCSVD<Eigen::MatrixXd> svd_x(X, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd_x.singularValues();
  const double smax = s.size() ? s.maxCoeff() : 0.0;
  if (!(smax > 0)) fail(ErrorCode::DegenerateScatter, "total scatter has no positive spectrum");
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > kSpectrumCutoff * smax) ++rank;
  const Eigen::MatrixXd omega = svd_x.matrixU().leftCols(rank);
  const Eigen::VectorXd theta_inv_sqrt = s.head(rank).cwiseInverse();  // Theta = s^2

  // Whitened between-class factor and its left singular vectors Xi.
  const Eigen::MatrixXd M = theta_inv_sqrt.asDiagonal() * (omega.transpose() * c.upsilon);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_m(M, Eigen::ComputeThinU);
  const Eigen::MatrixXd psi = omega * theta_inv_sqrt.asDiagonal() * svd_m.matrixU();
  const Eigen::VectorXd delta = svd_m.singularValues().cwiseAbs2();

  const auto order = descending_order(delta);
  std::vector<Eigen::Index> keep;
  for (auto j : order)
    if (delta[j] >= kMmcRetention) keep.push_back(j);

  LinearTransform t;
  t.source = TransformSource::MMC;
  t.phi.resize(X.rows(), static_cast<Eigen::Index>(keep.size()));
  t.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    t.phi.col(static_cast<Eigen::Index>(k)) = psi.col(keep[k]);
    t.eigenvalues[static_cast<Eigen::Index>(k)] = delta[keep[k]];
  }
  normalize_signs(t.phi);
  return t;
}

LinearTransform learn_pcalda(const LabeledDataset& data) {
  const ClassIndex classes = index_classes(data.labels);
  validate(data, classes);
  const Centred c = centre(data, classes);
  const auto D = data.samples.rows();
  const auto C = static_cast<Eigen::Index>(classes.names.size());

  // Sigma_t = A A^T with A = [Upsilon, W]; its leading eigenvectors are the
  // leading left singular vectors of A.
  Eigen::MatrixXd A(D, c.upsilon.cols() + c.within.cols());
  A << c.upsilon, c.within;
  Eigen::BDCSVD<Eigen::MatrixXd> svd_a(A, Eigen::ComputeThinU);
  const Eigen::Index k = std::min<Eigen::Index>(C, svd_a.matrixU().cols());
  Eigen::MatrixXd pca = svd_a.matrixU().leftCols(k);
  normalize_signs(pca);

  const Eigen::MatrixXd pb = pca.transpose() * c.upsilon;
  const Eigen::MatrixXd pw = pca.transpose() * c.within;
  const Eigen::MatrixXd sb = pb * pb.transpose();
  Eigen::MatrixXd sw = pw * pw.transpose();
  const double trace = sw.trace();
  if (!(trace > 0) || !std::isfinite(trace))
    fail(ErrorCode::SingularWithinScatter, "within-class scatter vanishes in the PCA subspace");
  sw.diagonal().array() += kWithinRegularization * trace / static_cast<double>(k);
  Eigen::LLT<Eigen::MatrixXd> llt(sw);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::SingularWithinScatter, "regularized within-class scatter is not invertible");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sb, sw);
  if (ges.info() != Eigen::Success)
    fail(ErrorCode::SingularWithinScatter, "LDA eigenproblem did not converge");
  const Eigen::VectorXd& ev = ges.eigenvalues();
  const auto order = descending_order(ev);
  Eigen::MatrixXd lda(k, k);
  LinearTransform t;
  t.source = TransformSource::PCALDA;
  t.eigenvalues.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    lda.col(j) = ges.eigenvectors().col(order[static_cast<std::size_t>(j)]).normalized();
    t.eigenvalues[j] = ev[order[static_cast<std::size_t>(j)]];
  }
  t.phi = pca * lda;
  normalize_signs(t.phi);
  return t;
}

Eigen::VectorXd apply_transform(const LinearTransform& t, const Eigen::VectorXd& sample) {
  if (sample.size() != t.phi.rows())
    fail(ErrorCode::DimensionMismatch, "sample has dimension " + std::to_string(sample.size()) +
                                           ", transform expects " + std::to_string(t.phi.rows()));
  return t.phi.transpose() * sample;
}

Eigen::MatrixXd apply_transform(const LinearTransform& t, const Eigen::MatrixXd& samples) {
  if (samples.rows() != t.phi.rows())
    fail(ErrorCode::DimensionMismatch, "samples have dimension " + std::to_string(samples.rows()) +
                                           ", transform expects " + std::to_string(t.phi.rows()));
  return t.phi.transpose() * samples;
}

Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& s) {
  if (s.size() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = std::max(ev.cwiseAbs().maxCoeff(), 0.0) * static_cast<double>(s.rows()) *
                        std::numeric_limits<double>::epsilon();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

double mahalanobis_distance(const Eigen::MatrixXd& covariance_pinv, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() != covariance_pinv.rows() || covariance_pinv.rows() != covariance_pinv.cols())
    fail(ErrorCode::DimensionMismatch, "Mahalanobis operands differ in dimension");
  const Eigen::VectorXd d = a - b;
  return std::sqrt(std::max(0.0, d.dot(covariance_pinv * d)));
}

MahalanobisModel MahalanobisModel::fit(LinearTransform t, const Eigen::MatrixXd& learning_samples) {
  MahalanobisModel m;
  const Eigen::MatrixXd f = apply_transform(t, learning_samples);
  m.transform = std::move(t);
  if (f.cols() == 0) {
    m.covariance_pinv = Eigen::MatrixXd::Identity(f.rows(), f.rows());
    return m;
  }
  const Eigen::MatrixXd centred = f.colwise() - f.rowwise().mean();
  const Eigen::MatrixXd cov = centred * centred.transpose() / static_cast<double>(f.cols());
  m.covariance_pinv = pseudo_inverse_psd(0.5 * (cov + cov.transpose()));
  return m;
}

}  // namespace gaitrec
