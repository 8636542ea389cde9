#pragma once

#include <span>
#include <vector>

namespace gaitrec::stats {

double mean(std::span<const double> x);
// Population standard deviation (divides by n).
double stddev(std::span<const double> x);
// Standardized third central moment m3 / m2^(3/2); 0 for zero variance.
double skewness(std::span<const double> x);
double min(std::span<const double> x);
double max(std::span<const double> x);
// Mean absolute difference of consecutive values; 0 for fewer than two values.
double mean_abs_diff(std::span<const double> x);

// Centred 3-point moving average; the end points average over their two
// available neighbours.
std::vector<double> smooth3(std::span<const double> x);
// Values at strict local minima and maxima of the smoothed signal, in time order.
std::vector<double> local_extremes(std::span<const double> x);

}  // namespace gaitrec::stats
