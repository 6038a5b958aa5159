#include "sistk/masking.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sistk/rng.hpp"

namespace sistk {

namespace {

bool fixed_schema(const std::vector<FeatureInput>& dataset) {
  const std::size_t p = dataset.front().size();
  for (const auto& x : dataset) {
    if (x.size() != p) return false;
    for (std::size_t i = 0; i < p; ++i)
      if (x.features[i].size() != dataset.front().features[i].size())
        return false;
  }
  return true;
}

}  // namespace

ImputationBaseline compute_mean_baseline(
    const std::vector<FeatureInput>& dataset, const std::string& schema_id) {
  if (dataset.empty())
    throw std::invalid_argument("compute_mean_baseline: empty dataset");
  for (const auto& x : dataset) x.validate();

  ImputationBaseline out;
  out.schema_id = schema_id;
  if (fixed_schema(dataset)) {
    const std::size_t p = dataset.front().size();
    out.broadcast = false;
    out.mask_vectors.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
      std::vector<double> acc(dataset.front().features[i].size(), 0.0);
      for (const auto& x : dataset)
        for (std::size_t j = 0; j < acc.size(); ++j)
          acc[j] += x.features[i][j];
      for (double& v : acc) v /= static_cast<double>(dataset.size());
      out.mask_vectors[i] = std::move(acc);
    }
    return out;
  }

  // Variable-length: pool every position of every input. All positions must
  // share one dimension, since the pooled mean has a single shape.
  const std::size_t dim = dataset.front().features.front().size();
  std::vector<double> acc(dim, 0.0);
  std::size_t count = 0;
  for (const auto& x : dataset) {
    for (const auto& f : x.features) {
      if (f.size() != dim)
        throw std::invalid_argument(
            "compute_mean_baseline: inconsistent dimensions (" +
            std::to_string(f.size()) + " vs " + std::to_string(dim) +
            ") in variable-length dataset");
      for (std::size_t j = 0; j < dim; ++j) acc[j] += f[j];
      ++count;
    }
  }
  for (double& v : acc) v /= static_cast<double>(count);
  out.broadcast = true;
  out.mask_vectors.push_back(std::move(acc));
  return out;
}

ImputationBaseline zero_baseline_like(const FeatureInput& exemplar,
                                      const std::string& schema_id) {
  exemplar.validate();
  ImputationBaseline out;
  out.schema_id = schema_id;
  out.broadcast = false;
  out.mask_vectors.reserve(exemplar.size());
  for (const auto& f : exemplar.features)
    out.mask_vectors.emplace_back(f.size(), 0.0);
  return out;
}

namespace {

DistributionStats stats_of(const std::vector<double>& xs) {
  DistributionStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double v : xs) sum += v;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double v : xs) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

ImputationComparisonReport compare_imputation(
    const Evaluator& model, const std::vector<FeatureInput>& dataset,
    const ImputationBaseline& baseline, std::size_t n_samples,
    std::uint64_t rng_seed) {
  if (n_samples < 1)
    throw std::invalid_argument("compare_imputation: n_samples must be >= 1");
  if (dataset.empty())
    throw std::invalid_argument("compare_imputation: empty dataset");
  const bool fixed = fixed_schema(dataset);

  Rng rng(rng_seed);
  std::vector<double> mean_deltas, hot_deltas, diffs;
  mean_deltas.reserve(n_samples);
  hot_deltas.reserve(n_samples);
  diffs.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const FeatureInput& x =
        dataset[rng.next_below(dataset.size())];
    const std::size_t p = x.size();
    const std::size_t i = rng.next_below(p);

    // Hot-deck donor: same feature position on fixed schemas, any pooled
    // position otherwise.
    const FeatureInput& donor = dataset[rng.next_below(dataset.size())];
    const std::size_t donor_pos = fixed ? i : rng.next_below(donor.size());

    FeatureInput masked = x;
    masked.features[i] = baseline.mask_for(i);
    FeatureInput hot = x;
    hot.features[i] = donor.features[donor_pos];
    if (hot.features[i].size() != x.features[i].size())
      throw std::invalid_argument(
          "compare_imputation: donor dimension mismatch at feature " +
          std::to_string(i));

    const std::vector<double> scores =
        evaluate_respecting_capability(model, {x, masked, hot});
    const double d_mean = scores[1] - scores[0];
    const double d_hot = scores[2] - scores[0];
    mean_deltas.push_back(d_mean);
    hot_deltas.push_back(d_hot);
    diffs.push_back(d_hot - d_mean);
  }

  ImputationComparisonReport report;
  report.n_samples = n_samples;
  report.mean_imputation = stats_of(mean_deltas);
  report.hot_deck = stats_of(hot_deltas);
  report.diff = stats_of(diffs);
  return report;
}

ImputationComparisonReport compare_imputation(
    const Evaluator& model, const std::vector<FeatureInput>& dataset,
    std::size_t n_samples, std::uint64_t rng_seed) {
  return compare_imputation(model, dataset,
                            compute_mean_baseline(dataset, "mean"), n_samples,
                            rng_seed);
}

void to_json(nlohmann::json& j, const ImputationComparisonReport& v) {
  j = nlohmann::json{
      {"n_samples", v.n_samples},
      {"mean_imputation",
       {{"mean", v.mean_imputation.mean}, {"stddev", v.mean_imputation.stddev}}},
      {"hot_deck", {{"mean", v.hot_deck.mean}, {"stddev", v.hot_deck.stddev}}},
      {"diff", {{"mean", v.diff.mean}, {"stddev", v.diff.stddev}}}};
}

}  // namespace sistk
