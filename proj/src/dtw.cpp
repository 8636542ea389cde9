#include "gaitrec/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaitrec/error.hpp"

namespace gaitrec {

namespace {

template <class LocalDistance>
double dtw_core(std::size_t n, std::size_t m, LocalDistance&& local, double cutoff) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m, inf), cur(m, inf);
  for (std::size_t i = 0; i < n; ++i) {
    double row_min = inf;
    for (std::size_t j = 0; j < m; ++j) {
      double best;
      if (i == 0 && j == 0) best = 0.0;
      else {
        best = inf;
        if (i > 0) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, cur[j - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      }
      cur[j] = best + local(i, j);
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > cutoff) return inf;
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace

double dtw_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const DtwConfig& cfg) {
  if (a.rows() == 0 || b.rows() == 0) fail(ErrorCode::EmptySequence, "dtw_distance: empty sequence");
  if (a.cols() != b.cols()) fail(ErrorCode::DimensionMismatch, "dtw_distance: frame dimensionality differs");
  // Frames as contiguous columns.
  const Eigen::MatrixXd at = a.transpose();
  const Eigen::MatrixXd bt = b.transpose();
  return dtw_core(
      static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows()),
      [&](std::size_t i, std::size_t j) {
        return (at.col(static_cast<Eigen::Index>(i)) - bt.col(static_cast<Eigen::Index>(j))).norm();
      },
      cfg.cutoff);
}

double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptySequence, "dtw_distance: empty sequence");
  return dtw_core(
      a.size(), b.size(), [&](std::size_t i, std::size_t j) { return std::abs(a[i] - b[j]); }, cfg.cutoff);
}

}  // namespace gaitrec
