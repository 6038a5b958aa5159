#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sistk/evaluator.hpp"
#include "sistk/types.hpp"

namespace sistk {

/// Mean-imputation baseline: z_i is the arithmetic mean of feature i across
/// the dataset. Datasets where every input has the same shape get one mask
/// vector per position; variable-length datasets pool all positions into a
/// single broadcast vector (all positions must then share one dimension).
/// Deterministic: accumulation runs in dataset order.
ImputationBaseline compute_mean_baseline(
    const std::vector<FeatureInput>& dataset, const std::string& schema_id);

/// All-zeros baseline shaped like `exemplar`. Never the default masking
/// strategy; needed as the f(0) reference of the attribution-budget method.
ImputationBaseline zero_baseline_like(const FeatureInput& exemplar,
                                      const std::string& schema_id);

struct DistributionStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Side-by-side check of the two imputation strategies. For n_samples random
/// (input, feature) draws, records the prediction change f(x \ {i}) - f(x)
/// when feature i is replaced by its mean-imputation mask versus a hot-deck
/// draw from the dataset's empirical feature distribution. `diff` summarizes
/// the per-draw difference hot_deck - mean_imputation.
struct ImputationComparisonReport {
  std::size_t n_samples = 0;
  DistributionStats mean_imputation;
  DistributionStats hot_deck;
  DistributionStats diff;
};

ImputationComparisonReport compare_imputation(
    const Evaluator& model, const std::vector<FeatureInput>& dataset,
    const ImputationBaseline& baseline, std::size_t n_samples,
    std::uint64_t rng_seed);

/// Convenience overload masking with the dataset's own mean baseline.
ImputationComparisonReport compare_imputation(
    const Evaluator& model, const std::vector<FeatureInput>& dataset,
    std::size_t n_samples, std::uint64_t rng_seed);

void to_json(nlohmann::json& j, const ImputationComparisonReport& v);

}  // namespace sistk
