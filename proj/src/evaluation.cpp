#include "gaitrec/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "gaitrec/error.hpp"
#include "gaitrec/parallel.hpp"
#include "gaitrec/rng.hpp"
#include "gaitrec/text.hpp"

namespace gaitrec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seed-stream tags.
enum : std::uint64_t { kClassDraw = 1, kSampleShuffle = 2, kInnerFolds = 3, kRandomBaseline = 4 };

std::size_t parse_count(std::string_view s, std::string_view what) {
  auto v = text::parse_int(text::trim(s));
  if (!v || *v <= 0) fail(ErrorCode::InvalidArgument, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  return static_cast<std::size_t>(*v);
}

void accumulate(std::vector<double>& sum, const std::vector<double>& v) {
  if (sum.empty()) sum.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size() && i < sum.size(); ++i) sum[i] += v[i];
}

void scale(std::vector<double>& v, double f) {
  for (double& x : v) x *= f;
}

}  // namespace

SetupConfig SetupConfig::homogeneous(std::size_t classes) {
  SetupConfig c;
  c.kind = SetupKind::Homogeneous;
  c.learning_classes = c.evaluation_classes = classes;
  return c;
}

SetupConfig SetupConfig::heterogeneous(std::size_t learning, std::size_t evaluation) {
  SetupConfig c;
  c.kind = SetupKind::Heterogeneous;
  c.learning_classes = learning;
  c.evaluation_classes = evaluation;
  return c;
}

SetupConfig SetupConfig::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    fail(ErrorCode::InvalidArgument, "setup must be homogeneous:<C> or heterogeneous:<CL>,<CE>");
  const std::string kind = text::lower(text::trim(text.substr(0, colon)));
  const auto args = text::split(text.substr(colon + 1), ',');
  if (kind == "homogeneous" && args.size() == 1) return homogeneous(parse_count(args[0], "class count"));
  if (kind == "heterogeneous" && args.size() == 2)
    return heterogeneous(parse_count(args[0], "learning class count"), parse_count(args[1], "evaluation class count"));
  fail(ErrorCode::InvalidArgument, "setup must be homogeneous:<C> or heterogeneous:<CL>,<CE>, got '" +
                                       std::string(text) + "'");
}

std::string SetupConfig::describe() const {
  if (kind == SetupKind::Homogeneous) return "homogeneous:" + std::to_string(learning_classes);
  return "heterogeneous:" + std::to_string(learning_classes) + "," + std::to_string(evaluation_classes);
}

DataSplit split_data(std::span<const std::string> labels, const SetupConfig& cfg, std::size_t repetition,
                     std::size_t fold) {
  std::vector<std::string> names;
  const auto cls = class_indices(labels, &names);
  std::vector<std::vector<std::size_t>> members(names.size());
  for (std::size_t i = 0; i < cls.size(); ++i) members[cls[i]].push_back(i);

  const bool homo = cfg.kind == SetupKind::Homogeneous;
  const std::size_t wanted = homo ? cfg.learning_classes : cfg.learning_classes + cfg.evaluation_classes;
  const bool valid = homo ? cfg.learning_classes >= 2 : cfg.learning_classes >= 1 && cfg.evaluation_classes >= 2;
  if (!valid || wanted > names.size())
    fail(ErrorCode::InsufficientClasses, "setup " + cfg.describe() + " needs at least " + std::to_string(std::max<std::size_t>(wanted, 2)) +
                                             " classes, the database has " + std::to_string(names.size()));
  if (homo && fold >= cfg.outer_folds) fail(ErrorCode::InvalidArgument, "outer fold out of range");

  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  Rng draw(derive_seed(cfg.seed, {kClassDraw, repetition}));
  shuffle(order, draw);

  DataSplit split;
  if (homo) {
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(wanted));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t c : chosen) {
      std::vector<std::size_t> m = members[c];
      Rng rng(derive_seed(cfg.seed, {kSampleShuffle, repetition, c}));
      shuffle(m, rng);
      for (std::size_t p = 0; p < m.size(); ++p)
        (p % cfg.outer_folds == fold ? split.learning : split.evaluation).push_back(m[p]);
    }
  } else {
    std::vector<std::size_t> learn(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.learning_classes));
    std::vector<std::size_t> eval(order.begin() + static_cast<std::ptrdiff_t>(cfg.learning_classes),
                                  order.begin() + static_cast<std::ptrdiff_t>(wanted));
    std::sort(learn.begin(), learn.end());
    std::sort(eval.begin(), eval.end());
    for (std::size_t c : learn) split.learning.insert(split.learning.end(), members[c].begin(), members[c].end());
    for (std::size_t c : eval) split.evaluation.insert(split.evaluation.end(), members[c].begin(), members[c].end());
  }
  std::sort(split.learning.begin(), split.learning.end());
  std::sort(split.evaluation.begin(), split.evaluation.end());
  return split;
}

Eigen::MatrixXd distance_matrix(const MethodModel& model, std::span<const Template> templates, double* seconds) {
  const std::size_t n = templates.size();
  Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> row_time(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto t0 = std::chrono::steady_clock::now();
      const double d = model.distance(templates[i], templates[j]);
      row_time[i] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!std::isfinite(d) || d < 0)
        fail(ErrorCode::DegenerateSample, "method '" + model.id() + "' produced an invalid distance");
      dm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
    }
  });
  dm.triangularView<Eigen::StrictlyLower>() = dm.transpose();
  if (seconds) *seconds = std::accumulate(row_time.begin(), row_time.end(), 0.0);
  return dm;
}

MethodReport evaluate_method(std::string_view method_id, std::span<const GaitSample> samples, const SetupConfig& cfg,
                             const EvaluationOptions& options) {
  const MethodDescriptor& desc = find_method(method_id);
  std::vector<std::string> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.label);

  MethodReport report;
  report.method_id = desc.id;
  report.display_name = desc.display_name;
  report.threshold = options.threshold;

  // Templates and distances of methods without learned state do not depend
  // on the split, so they are computed once per sample and pair.
  const bool reusable = desc.kind == MethodKind::Geometric || desc.kind == MethodKind::Raw;
  std::optional<MethodModel> shared_model;
  std::vector<std::optional<Template>> cached(samples.size());
  Eigen::MatrixXd cached_d;
  if (reusable) {
    shared_model = MethodModel::fit(desc.id, {}, options.method);
    cached_d = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(samples.size()),
                                         static_cast<Eigen::Index>(samples.size()), kNaN);
  }

  double distance_seconds = 0, distance_calls = 0;
  double td_sum = 0;
  Separability sep_sum;
  ClassifierMetrics acc;
  std::vector<double> cmc_sum;
  Sequences seq_sum;
  std::size_t runs = 0;

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    for (std::size_t fold = 0; fold < cfg.folds(); ++fold) {
      const DataSplit split = split_data(labels, cfg, rep, fold);
      std::vector<std::string> eval_labels;
      for (std::size_t i : split.evaluation) eval_labels.push_back(labels[i]);
      InnerLoop loop{cfg.inner_folds, cfg.fineness, cfg.evaluation_classes,
                     derive_seed(cfg.seed, {kInnerFolds, rep, fold})};

      ClassifierMetrics m;
      Separability sep;
      double td = 0;
      if (desc.kind == MethodKind::Random) {
        m = random_classifier_metrics(eval_labels, loop, derive_seed(cfg.seed, {kRandomBaseline, hash_id(desc.id), rep, fold}));
        sep = {kNaN, kNaN, kNaN, kNaN};
      } else {
        std::vector<Template> templates(split.evaluation.size());
        Eigen::MatrixXd dm;
        if (reusable) {
          parallel_for(split.evaluation.size(), [&](std::size_t k) {
            auto& slot = cached[split.evaluation[k]];
            if (!slot) slot = shared_model->extract(samples[split.evaluation[k]]);
          });
          for (std::size_t k = 0; k < templates.size(); ++k) templates[k] = *cached[split.evaluation[k]];
          std::vector<std::pair<std::size_t, std::size_t>> missing;
          for (std::size_t a = 0; a < split.evaluation.size(); ++a)
            for (std::size_t b = a + 1; b < split.evaluation.size(); ++b)
              if (std::isnan(cached_d(static_cast<Eigen::Index>(split.evaluation[a]),
                                      static_cast<Eigen::Index>(split.evaluation[b]))))
                missing.emplace_back(a, b);
          std::vector<double> took(missing.size());
          parallel_for(missing.size(), [&](std::size_t k) {
            const auto [a, b] = missing[k];
            const auto t0 = std::chrono::steady_clock::now();
            const double d = shared_model->distance(templates[a], templates[b]);
            took[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!std::isfinite(d) || d < 0)
              fail(ErrorCode::DegenerateSample, "method '" + desc.id + "' produced an invalid distance");
            const auto i = static_cast<Eigen::Index>(split.evaluation[a]);
            const auto j = static_cast<Eigen::Index>(split.evaluation[b]);
            cached_d(i, j) = cached_d(j, i) = d;
          });
          distance_seconds += std::accumulate(took.begin(), took.end(), 0.0);
          distance_calls += static_cast<double>(missing.size());
          const auto n = static_cast<Eigen::Index>(split.evaluation.size());
          dm.resize(n, n);
          for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
              dm(a, b) = a == b ? 0.0
                                : cached_d(static_cast<Eigen::Index>(split.evaluation[static_cast<std::size_t>(a)]),
                                           static_cast<Eigen::Index>(split.evaluation[static_cast<std::size_t>(b)]));
          const MethodModel& model = *shared_model;
          sep = class_separability(templates, [&](const Template& x, const Template& y) { return model.distance(x, y); },
                                   &dm);
        } else {
          std::vector<GaitSample> learning;
          learning.reserve(split.learning.size());
          for (std::size_t i : split.learning) learning.push_back(samples[i]);
          const MethodModel model = MethodModel::fit(desc.id, learning, options.method);
          parallel_for(templates.size(), [&](std::size_t k) { templates[k] = model.extract(samples[split.evaluation[k]]); });
          double secs = 0;
          dm = distance_matrix(model, templates, &secs);
          distance_seconds += secs;
          distance_calls += static_cast<double>(templates.size() * (templates.size() - 1) / 2);
          sep = class_separability(templates, [&](const Template& x, const Template& y) { return model.distance(x, y); },
                                   &dm);
        }
        for (const auto& t : templates) td += static_cast<double>(t.dimensionality());
        if (!templates.empty()) td /= static_cast<double>(templates.size());
        m = classifier_metrics(dm, eval_labels, loop);
      }

      sep_sum.dbi += sep.dbi;
      sep_sum.di += sep.di;
      sep_sum.sc += sep.sc;
      sep_sum.fdr += sep.fdr;
      acc.ccr += m.ccr;
      acc.eer += m.eer;
      acc.auc += m.auc;
      acc.map += m.map;
      acc.probes += m.probes;
      accumulate(cmc_sum, m.cmc);
      accumulate(seq_sum.far, m.sequences.far);
      accumulate(seq_sum.frr, m.sequences.frr);
      accumulate(seq_sum.roc_tar, m.sequences.roc_tar);
      accumulate(seq_sum.roc_far, m.sequences.roc_far);
      accumulate(seq_sum.rcl, m.sequences.rcl);
      accumulate(seq_sum.pcn, m.sequences.pcn);
      td_sum += td;
      ++runs;
    }
  }

  const double f = runs ? 1.0 / static_cast<double>(runs) : 0.0;
  report.runs = runs;
  report.separability = {sep_sum.dbi * f, sep_sum.di * f, sep_sum.sc * f, sep_sum.fdr * f};
  report.metrics.ccr = acc.ccr * f;
  report.metrics.eer = acc.eer * f;
  report.metrics.auc = acc.auc * f;
  report.metrics.map = acc.map * f;
  report.metrics.probes = acc.probes;
  for (auto* v : {&cmc_sum, &seq_sum.far, &seq_sum.frr, &seq_sum.roc_tar, &seq_sum.roc_far, &seq_sum.rcl, &seq_sum.pcn})
    scale(*v, f);
  report.metrics.cmc = std::move(cmc_sum);
  report.metrics.sequences = std::move(seq_sum);
  report.td = td_sum * f;
  report.dct_ms = desc.kind == MethodKind::Random ? kNaN
                  : distance_calls > 0            ? 1000.0 * distance_seconds / distance_calls
                                                  : 0.0;
  return report;
}

std::vector<MethodReport> evaluate_methods(std::span<const std::string> method_ids,
                                           std::span<const GaitSample> samples, const SetupConfig& cfg,
                                           const EvaluationOptions& options) {
  for (const auto& id : method_ids) find_method(id);  // fail fast on typos
  std::vector<MethodReport> out;
  for (const auto& id : method_ids) {
    if (options.progress) options.progress(id);
    out.push_back(evaluate_method(id, samples, cfg, options));
  }
  return out;
}

}  // namespace gaitrec
