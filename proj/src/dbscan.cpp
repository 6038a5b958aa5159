#include "sistk/dbscan.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sistk {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as the root so roots are canonical.
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

std::vector<int> dbscan_labels(const std::vector<double>& dist, std::size_t n,
                               const DbscanParams& params) {
  if (n == 0) throw std::invalid_argument("dbscan: empty population");
  if (dist.size() != n * n)
    throw std::invalid_argument("dbscan: distance matrix size mismatch");
  if (!(params.eps > 0.0)) throw std::invalid_argument("dbscan: eps must be > 0");
  if (params.min_pts < 1)
    throw std::invalid_argument("dbscan: min_pts must be >= 1");

  const auto within = [&](std::size_t i, std::size_t j) {
    return dist[i * n + j] <= params.eps;
  };

  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t neighbors = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (within(i, j)) ++neighbors;  // self included: d(i,i) = 0 <= eps
    core[i] = neighbors >= params.min_pts;
  }

  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      if (core[j] && within(i, j)) uf.unite(i, j);
  }

  std::vector<int> labels(n, kNoise);
  // Number core components by smallest member index.
  std::vector<int> root_label(n, kNoise);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    const std::size_t r = uf.find(i);
    if (root_label[r] == kNoise) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  // Border points: lowest-indexed core neighbor decides.
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !core[j]) continue;
      if (within(i, j)) {
        labels[i] = labels[j];
        break;
      }
    }
  }
  return labels;
}

}  // namespace sistk
