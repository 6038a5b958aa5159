#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sistk {

/// Median with the usual midpoint rule for even counts.
inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

/// Nearest-rank percentile: the smallest value with at least q*n of the
/// sample at or below it, q in (0, 1].
inline double percentile_nearest_rank(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("percentile: empty sample");
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("percentile: q must be in (0, 1]");
  std::sort(xs.begin(), xs.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(xs.size())));
  return xs[rank == 0 ? 0 : rank - 1];
}

}  // namespace sistk
