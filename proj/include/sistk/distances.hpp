#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace sistk {

/// Unit-cost edit distance between two symbol strings.
std::size_t levenshtein(const std::string& a, const std::string& b);

/// Jaccard distance 1 - |A ∩ B| / |A ∪ B| over the underlying sets of two
/// token bags. Both empty is defined as distance 0.
double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b);

/// Energy distance between two finite 2-D coordinate sets, with expectations
/// taken exactly over the uniform distributions on the sets:
///   2 E||X1 - X2|| - E||X1 - X1'|| - E||X2 - X2'||.
/// The within terms run over all ordered pairs including self-pairs, matching
/// the i.i.d.-copy definition. Throws std::invalid_argument on an empty set.
double energy_distance(const std::vector<std::array<double, 2>>& x1,
                       const std::vector<std::array<double, 2>>& x2);

enum class MetricKind { Levenshtein, Jaccard, Energy };

MetricKind metric_from_string(const std::string& s);
const char* to_string(MetricKind m);

/// Metric-specific view of one SIS used for pairwise distances: a symbol
/// string (levenshtein), a token bag (jaccard) or pixel coordinates (energy).
struct SisRendering {
  std::string symbols;
  std::vector<std::string> tokens;
  std::vector<std::array<double, 2>> coords;
};

double rendering_distance(MetricKind metric, const SisRendering& a,
                          const SisRendering& b);

/// Full symmetric n*n distance matrix, row-major. The OpenMP kernel in
/// pairwise_distances and the serial reference must agree bitwise.
std::vector<double> pairwise_distances(const std::vector<SisRendering>& items,
                                       MetricKind metric);
std::vector<double> pairwise_distances_serial(
    const std::vector<SisRendering>& items, MetricKind metric);

}  // namespace sistk
