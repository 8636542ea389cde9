#pragma once

// Homogeneous and heterogeneous evaluation setups with nested
// cross-validation over a database of gait samples.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaitrec/method.hpp"
#include "gaitrec/metrics.hpp"
#include "gaitrec/sample.hpp"

namespace gaitrec {

enum class SetupKind { Homogeneous, Heterogeneous };

struct SetupConfig {
  SetupKind kind = SetupKind::Homogeneous;
  std::size_t learning_classes = 0;    // C_L
  std::size_t evaluation_classes = 0;  // C~ (equals C_L when homogeneous)
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;
  std::size_t outer_folds = 3;  // homogeneous only
  std::size_t inner_folds = 10;
  std::size_t fineness = 30;

  static SetupConfig homogeneous(std::size_t classes);
  static SetupConfig heterogeneous(std::size_t learning, std::size_t evaluation);
  // "homogeneous:<C>" or "heterogeneous:<CL>,<CE>". Throws Error{InvalidArgument}.
  static SetupConfig parse(std::string_view text);
  std::string describe() const;
  // Outer folds per repetition: outer_folds when homogeneous, 1 otherwise.
  std::size_t folds() const noexcept { return kind == SetupKind::Homogeneous ? outer_folds : 1; }
};

struct DataSplit {
  std::vector<std::size_t> learning;    // indices into the sample list
  std::vector<std::size_t> evaluation;
};

// Homogeneous: C random classes; within each class a seeded shuffle, and
// outer fold f learns on the positions p with p mod outer_folds == f.
// Heterogeneous: C_L + C~ distinct random classes, all of their samples.
// Deterministic in (seed, repetition, fold). Throws Error{InsufficientClasses}.
DataSplit split_data(std::span<const std::string> labels, const SetupConfig& cfg, std::size_t repetition,
                     std::size_t fold = 0);

// One method averaged over repetitions and outer folds.
struct MethodReport {
  std::string method_id;
  std::string display_name;
  double threshold = 0;
  Separability separability;
  ClassifierMetrics metrics;
  double dct_ms = 0;       // mean wall-clock time per distance evaluation
  double td = 0;           // mean template dimensionality
  std::size_t runs = 0;    // repetitions x folds averaged
};

struct EvaluationOptions {
  MethodOptions method;
  double threshold = 0;  // printed in the report header
  // Called before each method starts; may be empty.
  std::function<void(std::string_view method_id)> progress;
};

MethodReport evaluate_method(std::string_view method_id, std::span<const GaitSample> samples, const SetupConfig& cfg,
                             const EvaluationOptions& options = {});
std::vector<MethodReport> evaluate_methods(std::span<const std::string> method_ids,
                                           std::span<const GaitSample> samples, const SetupConfig& cfg,
                                           const EvaluationOptions& options = {});

// Pairwise distances among templates, computed in parallel; also returns the
// summed wall-clock seconds of the individual distance calls.
Eigen::MatrixXd distance_matrix(const MethodModel& model, std::span<const Template> templates,
                                double* seconds = nullptr);

}  // namespace gaitrec
