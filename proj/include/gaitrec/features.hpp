#pragma once

// Method registry, geometric gait-feature extractors, raw-data templates and
// the per-method template distances.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaitrec/anatomy.hpp"
#include "gaitrec/sample.hpp"
#include "gaitrec/template.hpp"

namespace gaitrec {

enum class Representation { BR, JC, Both, None };
enum class DistanceKind { Euclidean, DtwSignals, CovarianceFrobenius, Mahalanobis, None };
enum class MethodKind { Geometric, Raw, Learned, Random };

struct MethodDescriptor {
  std::string id;            // registry id, e.g. "ahmed", "mmc_br"
  std::string display_name;  // report header name
  MethodKind kind;
  Representation representation;
  DistanceKind distance;
  std::optional<std::size_t> nominal_td;  // fixed-length methods only
};

// All twenty methods, in report order.
std::span<const MethodDescriptor> method_registry();
// Throws Error{UnknownMethod}.
const MethodDescriptor& find_method(std::string_view id);

// Joint pairs and joint triplets (angle at the middle joint) used for the
// distance and angle signals of the Gavrilova extractor.
struct SignalSelection {
  std::vector<std::pair<Landmark, Landmark>> distances;
  std::vector<std::array<Landmark, 3>> angles;

  static const SignalSelection& gavrilova_default();
  std::vector<std::string> describe() const;
};

struct FeatureOptions {
  SignalSelection gavrilova = SignalSelection::gavrilova_default();
  std::size_t kwolek_frames = 30;
  std::size_t kumar_frames = 150;
};

// Throws Error{UnknownMethod} for ids that are not geometric extractors,
// Error{RepresentationMismatch} if the sample lacks a required representation,
// Error{DegenerateSample} for samples shorter than two frames.
Template extract_geometric_features(std::string_view method_id, const GaitSample& sample,
                                    const FeatureOptions& options = {});

// Resamples to `frames` and flattens frame by frame; BR uses every rotation
// channel, JC every joint coordinate.
Template raw_template(const GaitSample& sample, Representation representation, std::size_t frames = 150);

// Inverse of the raw flattening: frames x (values / frames).
Eigen::MatrixXd unflatten(const Eigen::VectorXd& values, std::size_t frames);
Eigen::VectorXd flatten(const Eigen::MatrixXd& frames_by_channels);

// Distance for every non-learned method. Throws Error{LayoutMismatch}.
double template_distance(const MethodDescriptor& method, const Template& a, const Template& b);

// Covariance (divides by frame count) of the signals of a bundle template.
Eigen::MatrixXd bundle_covariance(const Template& t);

}  // namespace gaitrec
