#pragma once

#include <span>
#include <vector>

namespace enrollcast::stats {

// Median with the midpoint rule for even counts. Throws on empty input.
double median(std::vector<double> values);

// Empirical quantile by linear interpolation between order statistics
// (h = (n - 1) p). +infinity entries sort last; a quantile that touches one
// with non-zero weight is +infinity. `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

double quantile(std::vector<double> values, double p);

double mean(std::span<const double> values);

}  // namespace enrollcast::stats
