#pragma once

// Class-separability coefficients and rank/threshold based classifier metrics
// computed from distance matrices.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaitrec/template.hpp"

namespace gaitrec {

struct Separability {
  double dbi = 0, di = 0, sc = 0, fdr = 0;
};

// Geometry of a labelled template set with respect to class centroids.
struct ClassGeometry {
  std::vector<std::size_t> class_of;  // per template, 0..C-1
  Eigen::MatrixXd distances;          // N x N template distances
  Eigen::VectorXd to_own_centroid;    // N: distance of each template to its class centroid
  Eigen::MatrixXd centroid_distances; // C x C
  Eigen::VectorXd centroid_to_mean;   // C: distance of each centroid to the overall centroid
};

// DBI, DI, SC and FDR. Coincident centroids make DBI +inf; DI is 0 when two
// centroids coincide and +inf when every class has zero spread. a(n) averages
// over the whole own class (the zero self-distance included); a template with
// max(a, b) = 0 contributes 0. Throws Error{TooFewClasses}.
Separability separability(const ClassGeometry& g);

using DistanceFn = std::function<double(const Template&, const Template&)>;

// Builds the geometry and evaluates it. Centroids are arithmetic means for
// vector templates and medoids (minimal summed distance within the class) for
// signal bundles; `distances` may be passed to reuse a precomputed matrix.
Separability class_separability(std::span<const Template> templates, const DistanceFn& distance,
                                const Eigen::MatrixXd* distances = nullptr);

// Class index per label, in order of first appearance.
std::vector<std::size_t> class_indices(std::span<const std::string> labels, std::vector<std::string>* names = nullptr);

// Winner-takes-all: label of the nearest gallery template, lowest index on
// ties. Throws Error{EmptyGallery}.
std::string classify_wta(const Template& probe, std::span<const Template> gallery, const DistanceFn& distance);

// Piecewise-linear function through knots with non-decreasing x. Outside the
// knot range the end values are held; where several knots share an x the
// last one wins.
double interpolate(std::span<const double> xs, std::span<const double> ys, double x);

// Verification curve over genuine/impostor distances; knot 0 is the anchor
// (threshold 0, FAR 0, FRR 1), then one knot per distinct distance.
struct ErrorCurve {
  std::vector<double> threshold, far, frr;
};
ErrorCurve error_curve(std::span<const double> genuine, std::span<const double> impostor);
struct EqualError {
  double rate = 0, threshold = 0;
};
// Crossing of FAR and FRR, linearly interpolated between bracketing knots.
EqualError equal_error(const ErrorCurve& c);
// Trapezoidal area under TAR(FAR) = 1 - FRR over the knots.
double roc_auc(const ErrorCurve& c);

// Retrieval curve over (distance, relevant) pairs; knot 0 is the anchor at
// threshold 0 and recall 0 carrying the precision of the first retrieval.
struct RetrievalCurve {
  std::vector<double> threshold, recall, precision;
};
RetrievalCurve retrieval_curve(std::span<const double> distances, std::span<const char> relevant);
// Trapezoidal area under precision(recall).
double mean_average_precision(const RetrievalCurve& c);

struct Sequences {
  std::vector<double> far, frr;          // threshold sweep anchored at FAR 0 / FRR 1, EER in the middle
  std::vector<double> roc_tar, roc_far;  // (0,0) ... (1,1)
  std::vector<double> rcl, pcn;          // recall 0 ... 1
};

struct ClassifierMetrics {
  double ccr = 0, eer = 0, auc = 0, map = 0;
  std::vector<double> cmc;
  Sequences sequences;
  std::size_t probes = 0;
};

struct InnerLoop {
  std::size_t folds = 10;
  std::size_t fineness = 30;
  std::size_t cmc_length = 0;  // evaluation class count; 0 means number of labels
  std::uint64_t seed = 0;
};

// Fold of each of n items: a seeded shuffle, then position modulo folds.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed);

// Inner cross-validation on a symmetric distance matrix: every fold serves
// once as unlabeled probes against the other folds as gallery. CMC ranks
// identities by their nearest gallery template; RCL/PCN pool the
// probe-gallery pairs; FAR/FRR/ROC use every unordered pair of the matrix.
ClassifierMetrics classifier_metrics(const Eigen::MatrixXd& distances, std::span<const std::string> labels,
                                     const InnerLoop& loop);

// The random baseline through the same inner loop: each probe receives a
// uniformly random permutation of the gallery identities.
ClassifierMetrics random_classifier_metrics(std::span<const std::string> labels, const InnerLoop& loop,
                                            std::uint64_t method_seed);

}  // namespace gaitrec
