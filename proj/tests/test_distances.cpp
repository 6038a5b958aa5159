#include <cmath>

#include "doctest.h"
#include "helpers/reference_impls.hpp"
#include "sistk/dbscan.hpp"
#include "sistk/distances.hpp"
#include "sistk/rng.hpp"

using namespace sistk;

TEST_CASE("levenshtein distance") {
  CHECK(levenshtein("", "AC") == 2);
  CHECK(levenshtein("GATTACA", "GATTACA") == 0);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("AC", "") == 2);
}

TEST_CASE("levenshtein satisfies metric axioms on fuzzed triples") {
  Rng rng(13);
  const auto random_string = [&] {
    std::string s;
    const std::size_t len = rng.next_below(10);
    for (std::size_t i = 0; i < len; ++i)
      s += "ACGT"[rng.next_below(4)];
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = random_string(), b = random_string(),
                      c = random_string();
    CHECK(levenshtein(a, a) == 0);
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("jaccard distance over underlying sets") {
  CHECK(jaccard({"a", "b"}, {"a", "b"}) == 0.0);
  CHECK(jaccard({"a"}, {"b"}) == 1.0);
  CHECK(jaccard({"a", "b", "c"}, {"b", "c", "d"}) == 0.5);
  CHECK(jaccard({}, {}) == 0.0);
  // Multiset duplicates collapse.
  CHECK(jaccard({"a", "a", "b"}, {"a", "b", "b"}) == 0.0);
  CHECK(jaccard({"a", "b", "c"}, {"c"}) == jaccard({"c"}, {"a", "b", "c"}));
}

TEST_CASE("energy distance hand values") {
  using Coords = std::vector<std::array<double, 2>>;
  const Coords p = {{0.0, 0.0}};
  CHECK(energy_distance(p, p) == 0.0);
  CHECK(energy_distance({{0.0, 0.0}}, {{3.0, 4.0}}) == 10.0);
  const double d = energy_distance({{0.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}});
  CHECK(std::abs(d - 0.5) < 1e-12);
  CHECK_THROWS_AS(energy_distance({}, p), std::invalid_argument);
}

TEST_CASE("energy distance is symmetric and nonnegative on fuzz") {
  Rng rng(17);
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<std::array<double, 2>> a(1 + rng.next_below(6)),
        b(1 + rng.next_below(6));
    for (auto& pt : a) pt = {rng.next_symmetric() * 5, rng.next_symmetric() * 5};
    for (auto& pt : b) pt = {rng.next_symmetric() * 5, rng.next_symmetric() * 5};
    const double dab = energy_distance(a, b);
    CHECK(dab >= 0.0);
    CHECK(dab == energy_distance(b, a));
  }
}

namespace {

std::vector<SisRendering> random_population(Rng& rng, std::size_t n) {
  std::vector<SisRendering> items(n);
  for (auto& item : items) {
    const std::size_t len = 1 + rng.next_below(6);
    for (std::size_t i = 0; i < len; ++i) {
      item.symbols += "ACGT-"[rng.next_below(5)];
      item.tokens.push_back(std::string(1, "wxyz"[rng.next_below(4)]));
      item.coords.push_back(
          {rng.next_symmetric() * 4.0, rng.next_symmetric() * 4.0});
    }
  }
  return items;
}

}  // namespace

TEST_CASE("parallel pairwise distances equal the serial reference bitwise") {
  Rng rng(23);
  for (MetricKind metric :
       {MetricKind::Levenshtein, MetricKind::Jaccard, MetricKind::Energy}) {
    const auto items = random_population(rng, 40);
    CHECK(pairwise_distances(items, metric) ==
          pairwise_distances_serial(items, metric));
  }
}

TEST_CASE("dbscan separates well-spaced groups") {
  // Two tight 1-D groups rendered as coordinates.
  std::vector<SisRendering> items(6);
  const double xs[6] = {0.0, 0.1, 0.2, 10.0, 10.1, 10.2};
  for (int i = 0; i < 6; ++i) items[i].coords = {{xs[i], 0.0}};
  const auto dist = pairwise_distances_serial(items, MetricKind::Energy);

  const auto labels = dbscan_labels(dist, 6, {1.0, 2});
  CHECK(labels == std::vector<int>{0, 0, 0, 1, 1, 1});

  const auto noise = dbscan_labels(dist, 6, {0.01, 2});
  CHECK(noise == std::vector<int>(6, kNoise));

  CHECK_THROWS_AS(dbscan_labels({}, 0, {1.0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(dbscan_labels(dist, 6, {0.0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(dbscan_labels(dist, 6, {1.0, 0}), std::invalid_argument);
}

TEST_CASE("dbscan matches the reachability-closure oracle") {
  Rng rng(29);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t n = 3 + rng.next_below(13);
    std::vector<SisRendering> items(n);
    for (auto& item : items)
      item.coords = {{rng.next_symmetric() * 3.0, rng.next_symmetric() * 3.0}};
    const auto dist = pairwise_distances_serial(items, MetricKind::Energy);
    const double eps = 0.3 + 2.0 * rng.next_double();
    const std::size_t min_pts = 1 + rng.next_below(4);
    const auto got = dbscan_labels(dist, n, {eps, min_pts});
    const auto expected = testing::dbscan_closure_oracle(dist, n, eps, min_pts);
    CHECK(got == expected);
  }
}

namespace {

// Canonical form: relabel clusters by the smallest member index.
std::vector<int> canonicalize(const std::vector<int>& labels) {
  std::vector<int> mapping(labels.size() + 1, -2);
  std::vector<int> out(labels.size());
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoise) {
      out[i] = kNoise;
      continue;
    }
    if (mapping[static_cast<std::size_t>(labels[i])] == -2)
      mapping[static_cast<std::size_t>(labels[i])] = next++;
    out[i] = mapping[static_cast<std::size_t>(labels[i])];
  }
  return out;
}

}  // namespace

TEST_CASE("dbscan is permutation invariant up to relabeling") {
  Rng rng(37);
  int tested = 0;
  for (int iter = 0; iter < 60 && tested < 30; ++iter) {
    const std::size_t n = 4 + rng.next_below(10);
    std::vector<SisRendering> items(n);
    for (auto& item : items)
      item.coords = {{rng.next_symmetric() * 3.0, rng.next_symmetric() * 3.0}};
    const auto dist = pairwise_distances_serial(items, MetricKind::Energy);
    const double eps = 0.5 + rng.next_double();
    const std::size_t min_pts = 2 + rng.next_below(2);
    const auto labels = dbscan_labels(dist, n, {eps, min_pts});

    // Skip instances where a border point touches cores of two clusters:
    // there the documented lowest-core-neighbor rule is index dependent.
    bool ambiguous_border = false;
    std::vector<bool> core(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t deg = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i * n + j] <= eps) ++deg;
      core[i] = deg >= min_pts;
    }
    for (std::size_t i = 0; i < n && !ambiguous_border; ++i) {
      if (core[i]) continue;
      int seen = -2;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || !core[j] || dist[i * n + j] > eps) continue;
        if (seen == -2) seen = labels[j];
        else if (labels[j] != seen) ambiguous_border = true;
      }
    }
    if (ambiguous_border) continue;
    ++tested;

    // Reverse the point order and map back.
    std::vector<SisRendering> reversed(items.rbegin(), items.rend());
    const auto rdist = pairwise_distances_serial(reversed, MetricKind::Energy);
    const auto rlabels = dbscan_labels(rdist, n, {eps, min_pts});
    std::vector<int> mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[i] = rlabels[n - 1 - i];
    CHECK(canonicalize(mapped) == canonicalize(labels));
  }
  CHECK(tested >= 20);
}

TEST_CASE("dbscan reruns are bit-identical") {
  Rng rng(41);
  const std::size_t n = 20;
  std::vector<SisRendering> items(n);
  for (auto& item : items)
    item.coords = {{rng.next_symmetric() * 2.0, rng.next_symmetric() * 2.0}};
  const auto dist = pairwise_distances(items, MetricKind::Energy);
  const auto a = dbscan_labels(dist, n, {0.8, 3});
  const auto b = dbscan_labels(dist, n, {0.8, 3});
  CHECK(a == b);
}
