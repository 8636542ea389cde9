#include "gaitrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "gaitrec/error.hpp"
#include "gaitrec/rng.hpp"

namespace gaitrec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(double num, double den) {
  if (den > 0) return num / den;
  return num > 0 ? kInf : 0.0;
}

// Indices that sort `v` ascending, stable.
std::vector<std::size_t> argsort(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  return idx;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double area = 0;
  for (std::size_t k = 1; k < x.size(); ++k) area += (x[k] - x[k - 1]) * 0.5 * (y[k] + y[k - 1]);
  return area;
}

// Fineness-point threshold grid from 0 to `last`.
std::vector<double> linear_grid(double last, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = points > 1 ? last * static_cast<double>(i) / static_cast<double>(points - 1) : last;
  return g;
}

Sequences sample_sequences(const ErrorCurve& err, const EqualError& eer, const RetrievalCurve& ret,
                           std::size_t fineness) {
  Sequences s;
  const double max_pair = err.threshold.empty() ? 0.0 : err.threshold.back();
  // FAR/FRR: the EER threshold sits at index fineness/2.
  std::vector<double> far_grid;
  if (eer.threshold > 0) {
    const double half = static_cast<double>(fineness / 2);
    for (std::size_t i = 0; i < fineness; ++i) far_grid.push_back(eer.threshold * static_cast<double>(i) / half);
  } else {
    far_grid = linear_grid(max_pair, fineness);
  }
  for (std::size_t i = 0; i < fineness; ++i) {
    const bool anchor = i == 0;
    s.far.push_back(anchor ? 0.0 : interpolate(err.threshold, err.far, far_grid[i]));
    s.frr.push_back(anchor ? 1.0 : interpolate(err.threshold, err.frr, far_grid[i]));
  }
  const auto roc_grid = linear_grid(max_pair, fineness);
  for (std::size_t i = 0; i < fineness; ++i) {
    const bool anchor = i == 0;
    s.roc_tar.push_back(anchor ? 0.0 : 1.0 - interpolate(err.threshold, err.frr, roc_grid[i]));
    s.roc_far.push_back(anchor ? 0.0 : interpolate(err.threshold, err.far, roc_grid[i]));
  }
  const auto ret_grid = linear_grid(ret.threshold.empty() ? 0.0 : ret.threshold.back(), fineness);
  for (std::size_t i = 0; i < fineness; ++i) {
    const bool anchor = i == 0 || ret.threshold.empty();
    s.rcl.push_back(anchor ? 0.0 : interpolate(ret.threshold, ret.recall, ret_grid[i]));
    s.pcn.push_back(ret.precision.empty() ? 0.0
                    : anchor              ? ret.precision.front()
                                          : interpolate(ret.threshold, ret.precision, ret_grid[i]));
  }
  return s;
}

}  // namespace

std::vector<std::size_t> class_indices(std::span<const std::string> labels, std::vector<std::string>* names) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    auto [it, fresh] = slot.try_emplace(l, slot.size());
    if (fresh && names) names->push_back(l);
    out.push_back(it->second);
  }
  return out;
}

Separability separability(const ClassGeometry& g) {
  const std::size_t N = g.class_of.size();
  const auto C = static_cast<std::size_t>(g.centroid_distances.rows());
  if (C < 2) fail(ErrorCode::TooFewClasses, "separability needs at least two classes");
  std::vector<double> count(C, 0.0), spread(C, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    count[g.class_of[n]] += 1;
    spread[g.class_of[n]] += g.to_own_centroid[static_cast<Eigen::Index>(n)];
  }
  for (std::size_t c = 0; c < C; ++c) spread[c] = count[c] > 0 ? spread[c] / count[c] : 0.0;
  auto delta = [&](std::size_t a, std::size_t b) {
    return g.centroid_distances(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };

  Separability s;
  for (std::size_t c = 0; c < C; ++c) {
    double worst = -kInf;
    for (std::size_t d = 0; d < C; ++d) {
      if (d == c) continue;
      const double dist = delta(c, d);
      worst = std::max(worst, dist > 0 ? (spread[c] + spread[d]) / dist : kInf);
    }
    s.dbi += worst;
  }
  s.dbi /= static_cast<double>(C);

  double min_between = kInf;
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t d = c + 1; d < C; ++d) min_between = std::min(min_between, delta(c, d));
  const double max_spread = *std::max_element(spread.begin(), spread.end());
  s.di = min_between > 0 ? ratio(min_between, max_spread) : 0.0;

  for (std::size_t n = 0; n < N; ++n) {
    std::vector<double> sum(C, 0.0);
    for (std::size_t m = 0; m < N; ++m)
      sum[g.class_of[m]] += g.distances(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    const std::size_t own = g.class_of[n];
    const double a = sum[own] / count[own];
    double b = kInf;
    for (std::size_t c = 0; c < C; ++c)
      if (c != own && count[c] > 0) b = std::min(b, sum[c] / count[c]);
    const double m = std::max(a, b);
    s.sc += m > 0 ? (b - a) / m : 0.0;
  }
  s.sc /= static_cast<double>(N);

  double between = 0, within = 0;
  for (std::size_t c = 0; c < C; ++c) between += g.centroid_to_mean[static_cast<Eigen::Index>(c)];
  between /= static_cast<double>(C);
  for (std::size_t n = 0; n < N; ++n) within += g.to_own_centroid[static_cast<Eigen::Index>(n)];
  within /= static_cast<double>(N);
  s.fdr = ratio(between, within);
  return s;
}

Separability class_separability(std::span<const Template> templates, const DistanceFn& distance,
                                const Eigen::MatrixXd* distances) {
  const std::size_t N = templates.size();
  std::vector<std::string> labels;
  for (const auto& t : templates) labels.push_back(t.label);
  ClassGeometry g;
  std::vector<std::string> names;
  g.class_of = class_indices(labels, &names);
  const std::size_t C = names.size();
  if (C < 2) fail(ErrorCode::TooFewClasses, "separability needs at least two classes");

  if (distances) {
    g.distances = *distances;
  } else {
    g.distances = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j)
        g.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            g.distances(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = distance(templates[i], templates[j]);
  }

  const bool bundles = std::any_of(templates.begin(), templates.end(), [](const auto& t) { return t.is_bundle(); });
  g.to_own_centroid.resize(static_cast<Eigen::Index>(N));
  g.centroid_distances.resize(static_cast<Eigen::Index>(C), static_cast<Eigen::Index>(C));
  g.centroid_to_mean.resize(static_cast<Eigen::Index>(C));
  auto D = [&](std::size_t i, std::size_t j) { return g.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); };

  if (bundles) {
    // Medoids: member with the smallest summed distance to its group.
    auto medoid = [&](auto&& in_group) {
      std::size_t best = N;
      double best_sum = kInf;
      for (std::size_t i = 0; i < N; ++i) {
        if (!in_group(i)) continue;
        double sum = 0;
        for (std::size_t j = 0; j < N; ++j)
          if (in_group(j)) sum += D(i, j);
        if (sum < best_sum) best_sum = sum, best = i;
      }
      return best;
    };
    std::vector<std::size_t> med(C);
    for (std::size_t c = 0; c < C; ++c) med[c] = medoid([&](std::size_t i) { return g.class_of[i] == c; });
    const std::size_t all = medoid([](std::size_t) { return true; });
    for (std::size_t n = 0; n < N; ++n) g.to_own_centroid[static_cast<Eigen::Index>(n)] = D(n, med[g.class_of[n]]);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t d = 0; d < C; ++d)
        g.centroid_distances(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)) = D(med[c], med[d]);
      g.centroid_to_mean[static_cast<Eigen::Index>(c)] = D(med[c], all);
    }
  } else {
    std::vector<Template> cent(C);
    std::vector<double> count(C, 0.0);
    Template mean = templates.front();
    mean.values.setZero();
    for (std::size_t c = 0; c < C; ++c) cent[c] = mean;
    for (std::size_t n = 0; n < N; ++n) {
      if (templates[n].values.size() != mean.values.size())
        fail(ErrorCode::LayoutMismatch, "templates differ in dimensionality");
      cent[g.class_of[n]].values += templates[n].values;
      count[g.class_of[n]] += 1;
      mean.values += templates[n].values;
    }
    for (std::size_t c = 0; c < C; ++c) cent[c].values /= count[c];
    mean.values /= static_cast<double>(N);
    for (std::size_t n = 0; n < N; ++n)
      g.to_own_centroid[static_cast<Eigen::Index>(n)] = distance(templates[n], cent[g.class_of[n]]);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t d = 0; d < C; ++d)
        g.centroid_distances(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)) =
            c == d ? 0.0 : distance(cent[c], cent[d]);
      g.centroid_to_mean[static_cast<Eigen::Index>(c)] = distance(cent[c], mean);
    }
  }
  return separability(g);
}

std::string classify_wta(const Template& probe, std::span<const Template> gallery, const DistanceFn& distance) {
  if (gallery.empty()) fail(ErrorCode::EmptyGallery, "the gallery is empty");
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const double d = distance(probe, gallery[i]);
    if (d < best_d) best_d = d, best = i;
  }
  return gallery[best].label;
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  if (xs.empty()) return kNaN;
  if (x < xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  // First knot strictly beyond x; its predecessor is the last knot at or before x.
  const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

ErrorCurve error_curve(std::span<const double> genuine, std::span<const double> impostor) {
  std::vector<std::pair<double, bool>> all;
  all.reserve(genuine.size() + impostor.size());
  for (double d : genuine) all.emplace_back(d, true);
  for (double d : impostor) all.emplace_back(d, false);
  std::sort(all.begin(), all.end());
  const double G = static_cast<double>(std::max<std::size_t>(1, genuine.size()));
  const double I = static_cast<double>(std::max<std::size_t>(1, impostor.size()));
  ErrorCurve c{{0.0}, {0.0}, {1.0}};
  std::size_t accepted_genuine = 0, accepted_impostor = 0;
  for (std::size_t k = 0; k < all.size();) {
    const double d = all[k].first;
    for (; k < all.size() && all[k].first == d; ++k) (all[k].second ? accepted_genuine : accepted_impostor)++;
    c.threshold.push_back(d);
    c.far.push_back(static_cast<double>(accepted_impostor) / I);
    c.frr.push_back(genuine.empty() ? 0.0 : 1.0 - static_cast<double>(accepted_genuine) / G);
  }
  return c;
}

EqualError equal_error(const ErrorCurve& c) {
  for (std::size_t k = 1; k < c.far.size(); ++k) {
    const double prev = c.far[k - 1] - c.frr[k - 1];
    const double cur = c.far[k] - c.frr[k];
    if (cur < 0) continue;
    const double t = prev < 0 ? -prev / (cur - prev) : 0.0;
    return {c.far[k - 1] + t * (c.far[k] - c.far[k - 1]),
            c.threshold[k - 1] + t * (c.threshold[k] - c.threshold[k - 1])};
  }
  return {c.far.empty() ? kNaN : 0.5 * (c.far.back() + c.frr.back()), c.threshold.empty() ? 0.0 : c.threshold.back()};
}

double roc_auc(const ErrorCurve& c) {
  std::vector<double> tar(c.frr.size());
  for (std::size_t k = 0; k < tar.size(); ++k) tar[k] = 1.0 - c.frr[k];
  tar.front() = 0.0;  // the anchor accepts nothing
  return trapezoid(c.far, tar);
}

RetrievalCurve retrieval_curve(std::span<const double> distances, std::span<const char> relevant) {
  if (distances.size() != relevant.size()) fail(ErrorCode::DimensionMismatch, "distance and relevance counts differ");
  const auto order = argsort(distances);
  const double total_relevant = static_cast<double>(std::count(relevant.begin(), relevant.end(), 1));
  RetrievalCurve c;
  std::size_t retrieved = 0, hits = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double d = distances[order[k]];
    for (; k < order.size() && distances[order[k]] == d; ++k, ++retrieved) hits += relevant[order[k]] ? 1 : 0;
    c.threshold.push_back(d);
    c.recall.push_back(total_relevant > 0 ? static_cast<double>(hits) / total_relevant : 0.0);
    c.precision.push_back(static_cast<double>(hits) / static_cast<double>(retrieved));
  }
  if (!c.precision.empty()) {
    c.threshold.insert(c.threshold.begin(), 0.0);
    c.recall.insert(c.recall.begin(), 0.0);
    c.precision.insert(c.precision.begin(), c.precision.front());
  }
  return c;
}

double mean_average_precision(const RetrievalCurve& c) { return trapezoid(c.recall, c.precision); }

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds == 0) fail(ErrorCode::InvalidArgument, "fold count must be positive");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(order, rng);
  std::vector<std::size_t> fold(n);
  for (std::size_t p = 0; p < n; ++p) fold[order[p]] = p % folds;
  return fold;
}

namespace {

struct InnerCounts {
  std::vector<double> cmc_hits;
  std::size_t probes = 0;
};

template <class RankFn>
InnerCounts run_inner_loop(std::span<const std::string> labels, const InnerLoop& loop, std::size_t cmc_length,
                           RankFn&& rank_of_truth) {
  const std::size_t n = labels.size();
  const auto folds = fold_assignment(n, loop.folds, loop.seed);
  InnerCounts out{std::vector<double>(cmc_length, 0.0), 0};
  for (std::size_t f = 0; f < loop.folds; ++f) {
    std::vector<std::size_t> probes, gallery;
    for (std::size_t i = 0; i < n; ++i) (folds[i] == f ? probes : gallery).push_back(i);
    if (probes.empty() || gallery.empty()) continue;
    for (std::size_t p : probes) {
      ++out.probes;
      const std::size_t rank = rank_of_truth(f, p, gallery);  // 1-based; 0 when absent
      if (rank == 0) continue;
      for (std::size_t k = rank - 1; k < cmc_length; ++k) out.cmc_hits[k] += 1;
    }
  }
  return out;
}

std::vector<double> cmc_rates(const InnerCounts& c) {
  std::vector<double> cmc(c.cmc_hits.size(), 0.0);
  for (std::size_t k = 0; k < cmc.size(); ++k) cmc[k] = c.probes ? c.cmc_hits[k] / static_cast<double>(c.probes) : 0.0;
  return cmc;
}

std::size_t cmc_length_for(std::span<const std::string> labels, const InnerLoop& loop) {
  if (loop.cmc_length) return loop.cmc_length;
  std::vector<std::string> names;
  class_indices(labels, &names);
  return names.size();
}

}  // namespace

ClassifierMetrics classifier_metrics(const Eigen::MatrixXd& dm, std::span<const std::string> labels,
                                     const InnerLoop& loop) {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(dm.rows()) != n || dm.rows() != dm.cols())
    fail(ErrorCode::DimensionMismatch, "distance matrix does not match the label count");
  std::vector<std::string> names;
  const auto cls = class_indices(labels, &names);
  if (names.size() < 2) fail(ErrorCode::TooFewClasses, "classifier metrics need at least two classes");
  const std::size_t cmc_length = cmc_length_for(labels, loop);

  std::vector<double> pair_d;
  std::vector<char> pair_rel;
  std::vector<double> best(names.size());
  std::vector<std::size_t> best_at(names.size());
  auto rank = [&](std::size_t, std::size_t p, const std::vector<std::size_t>& gallery) -> std::size_t {
    std::fill(best.begin(), best.end(), kInf);
    std::fill(best_at.begin(), best_at.end(), n);
    for (std::size_t g : gallery) {
      const double d = dm(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(g));
      pair_d.push_back(d);
      pair_rel.push_back(cls[g] == cls[p]);
      if (d < best[cls[g]]) best[cls[g]] = d, best_at[cls[g]] = g;
    }
    const std::size_t truth = cls[p];
    if (best_at[truth] == n) return 0;
    // Identities ahead of the truth: smaller distance, or equal with an earlier best template.
    std::size_t ahead = 0;
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c == truth || best_at[c] == n) continue;
      if (best[c] < best[truth] || (best[c] == best[truth] && best_at[c] < best_at[truth])) ++ahead;
    }
    return ahead + 1;
  };
  const InnerCounts counts = run_inner_loop(labels, loop, cmc_length, rank);

  ClassifierMetrics m;
  m.cmc = cmc_rates(counts);
  m.ccr = m.cmc.empty() ? 0.0 : m.cmc.front();
  m.probes = counts.probes;

  std::vector<double> genuine, impostor;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      (cls[i] == cls[j] ? genuine : impostor).push_back(dm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  const ErrorCurve err = error_curve(genuine, impostor);
  const EqualError eer = equal_error(err);
  const RetrievalCurve ret = retrieval_curve(pair_d, std::span<const char>(pair_rel.data(), pair_rel.size()));
  m.eer = eer.rate;
  m.auc = roc_auc(err);
  m.map = mean_average_precision(ret);
  m.sequences = sample_sequences(err, eer, ret, loop.fineness);
  return m;
}

ClassifierMetrics random_classifier_metrics(std::span<const std::string> labels, const InnerLoop& loop,
                                            std::uint64_t method_seed) {
  std::vector<std::string> names;
  const auto cls = class_indices(labels, &names);
  const std::size_t cmc_length = cmc_length_for(labels, loop);
  Rng rng(method_seed);
  auto rank = [&](std::size_t, std::size_t p, const std::vector<std::size_t>& gallery) -> std::size_t {
    std::vector<std::size_t> ids;
    std::vector<char> seen(names.size(), 0);
    for (std::size_t g : gallery)
      if (!seen[cls[g]]) seen[cls[g]] = 1, ids.push_back(cls[g]);
    shuffle(ids, rng);
    for (std::size_t r = 0; r < ids.size(); ++r)
      if (ids[r] == cls[p]) return r + 1;
    return 0;
  };
  const InnerCounts counts = run_inner_loop(labels, loop, cmc_length, rank);
  ClassifierMetrics m;
  m.cmc = cmc_rates(counts);
  m.ccr = m.cmc.empty() ? 0.0 : m.cmc.front();
  m.probes = counts.probes;
  m.eer = m.auc = m.map = kNaN;
  const std::vector<double> blank(loop.fineness, kNaN);
  m.sequences = {blank, blank, blank, blank, blank, blank};
  return m;
}

}  // namespace gaitrec
