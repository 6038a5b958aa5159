#pragma once

#include <cstddef>
#include <vector>

namespace sistk {

constexpr int kNoise = -1;

struct DbscanParams {
  double eps = 0.0;
  std::size_t min_pts = 0;
};

/// DBSCAN over a precomputed symmetric n*n distance matrix (row-major).
/// Neighborhoods use d <= eps and include the point itself. Clusters are the
/// connected components of core points under eps-adjacency; a border point
/// joins the cluster of its lowest-indexed core neighbor (deterministic,
/// order-independent). Labels are canonical: clusters are numbered 0,1,...
/// by their smallest member index; noise points get kNoise.
std::vector<int> dbscan_labels(const std::vector<double>& dist, std::size_t n,
                               const DbscanParams& params);

}  // namespace sistk
