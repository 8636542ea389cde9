#pragma once

// Dynamic time warping with the symmetric (match, insert, delete) step pattern,
// an unconstrained window and Euclidean local distance between frames. The cost
// is the plain sum of local distances along the path; no length normalization.

#include <Eigen/Core>
#include <limits>
#include <span>

namespace gaitrec {

struct DtwConfig {
  // Once every cell of a DP row exceeds this bound the true distance must too,
  // and +inf is returned instead. Results at or below the bound are exact.
  double cutoff = std::numeric_limits<double>::infinity();
};

// Rows of `a` and `b` are frames. Throws Error{EmptySequence} or
// Error{DimensionMismatch}.
double dtw_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const DtwConfig& cfg = {});
double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg = {});

}  // namespace gaitrec
