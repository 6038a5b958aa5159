#include "sistk/distances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sistk {

std::size_t levenshtein(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double mean_cross_norm(const std::vector<std::array<double, 2>>& x,
                       const std::vector<std::array<double, 2>>& y) {
  double s = 0.0;
  for (const auto& p : x)
    for (const auto& q : y)
      s += std::hypot(p[0] - q[0], p[1] - q[1]);
  return s / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

}  // namespace

double energy_distance(const std::vector<std::array<double, 2>>& x1,
                       const std::vector<std::array<double, 2>>& x2) {
  if (x1.empty() || x2.empty())
    throw std::invalid_argument("energy_distance: empty coordinate set");
  // Canonical operand order keeps the summation order, and therefore the
  // result, bitwise identical under argument swap.
  const auto* a = &x1;
  const auto* b = &x2;
  if (*b < *a) std::swap(a, b);
  return 2.0 * mean_cross_norm(*a, *b) - mean_cross_norm(*a, *a) -
         mean_cross_norm(*b, *b);
}

MetricKind metric_from_string(const std::string& s) {
  if (s == "levenshtein") return MetricKind::Levenshtein;
  if (s == "jaccard") return MetricKind::Jaccard;
  if (s == "energy") return MetricKind::Energy;
  throw std::invalid_argument("unknown metric: " + s);
}

const char* to_string(MetricKind m) {
  switch (m) {
    case MetricKind::Levenshtein: return "levenshtein";
    case MetricKind::Jaccard: return "jaccard";
    case MetricKind::Energy: return "energy";
  }
  return "unknown";
}

double rendering_distance(MetricKind metric, const SisRendering& a,
                          const SisRendering& b) {
  switch (metric) {
    case MetricKind::Levenshtein:
      return static_cast<double>(levenshtein(a.symbols, b.symbols));
    case MetricKind::Jaccard:
      return jaccard(a.tokens, b.tokens);
    case MetricKind::Energy:
      return energy_distance(a.coords, b.coords);
  }
  throw std::invalid_argument("unknown metric");
}

std::vector<double> pairwise_distances(const std::vector<SisRendering>& items,
                                       MetricKind metric) {
  const std::size_t n = items.size();
  std::vector<double> dist(n * n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (n > 2)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
      const double d =
          rendering_distance(metric, items[static_cast<std::size_t>(i)],
                             items[j]);
      dist[static_cast<std::size_t>(i) * n + j] = d;
      dist[j * n + static_cast<std::size_t>(i)] = d;
    }
  }
  return dist;
}

std::vector<double> pairwise_distances_serial(
    const std::vector<SisRendering>& items, MetricKind metric) {
  const std::size_t n = items.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = rendering_distance(metric, items[i], items[j]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return dist;
}

}  // namespace sistk
