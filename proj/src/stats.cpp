#include "enrollcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace enrollcast::stats {

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) {
        return values[n / 2];
    }
    const double a = values[n / 2 - 1];
    const double b = values[n / 2];
    if (std::isinf(a) || std::isinf(b)) {
        return std::isinf(a) ? a : b;
    }
    return 0.5 * (a + b);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty list");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("quantile probability outside [0, 1]");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    const double a = sorted[lo];
    if (frac == 0.0 || lo + 1 >= sorted.size()) {
        return a;
    }
    const double b = sorted[lo + 1];
    if (std::isinf(a) || std::isinf(b)) {
        return std::numeric_limits<double>::infinity();
    }
    return a + frac * (b - a);
}

double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty list");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace enrollcast::stats
