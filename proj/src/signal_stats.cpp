#include "gaitrec/signal_stats.hpp"

#include <algorithm>
#include <cmath>

#include "gaitrec/error.hpp"

namespace gaitrec::stats {

namespace {

void require(std::span<const double> x, const char* what) {
  if (x.empty()) fail(ErrorCode::DegenerateSample, std::string(what) + " of an empty signal");
}

double central_moment(std::span<const double> x, double mu, int order) {
  double acc = 0;
  for (double v : x) acc += std::pow(v - mu, order);
  return acc / static_cast<double>(x.size());
}

}  // namespace

double mean(std::span<const double> x) {
  require(x, "mean");
  double acc = 0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  require(x, "stddev");
  return std::sqrt(central_moment(x, mean(x), 2));
}

double skewness(std::span<const double> x) {
  require(x, "skewness");
  const double mu = mean(x);
  const double m2 = central_moment(x, mu, 2);
  // Rounding in the mean leaves a residual variance on constant signals.
  if (m2 <= 1e-24 * std::max(1.0, mu * mu)) return 0.0;
  return central_moment(x, mu, 3) / std::pow(m2, 1.5);
}

double min(std::span<const double> x) {
  require(x, "min");
  return *std::min_element(x.begin(), x.end());
}

double max(std::span<const double> x) {
  require(x, "max");
  return *std::max_element(x.begin(), x.end());
}

double mean_abs_diff(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  double acc = 0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += std::abs(x[i] - x[i - 1]);
  return acc / static_cast<double>(x.size() - 1);
}

std::vector<double> smooth3(std::span<const double> x) {
  std::vector<double> out(x.size());
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double acc = 0;
    for (std::size_t k = lo; k <= hi; ++k) acc += x[k];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> local_extremes(std::span<const double> x) {
  const auto s = smooth3(x);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const bool is_max = s[i] > s[i - 1] && s[i] > s[i + 1];
    const bool is_min = s[i] < s[i - 1] && s[i] < s[i + 1];
    if (is_max || is_min) out.push_back(s[i]);
  }
  return out;
}

}  // namespace gaitrec::stats
