#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sistk/dbscan.hpp"
#include "sistk/distances.hpp"
#include "sistk/evaluator.hpp"
#include "sistk/types.hpp"

namespace sistk {

/// One SIS prepared for clustering: which model produced it, its
/// metric-specific rendering, and a display string for exemplar tables.
struct SisPopulationItem {
  std::string source_model_tag;
  SisRendering rendering;
  std::string display;
};

/// Builds the rendering of one SIS against its source input.
///   levenshtein: the subsequence from the first to the last selected
///     position, with one gap symbol '-' per masked run (needs token_labels);
///   jaccard: the bag of selected tokens (needs token_labels);
///   energy: one 2-D coordinate per selected index: (i / grid_width,
///     i % grid_width), or (i, 0) when grid_width is 0 (sequence layout).
SisRendering render_sis(const SufficientInputSubset& sis,
                        const FeatureInput& input, MetricKind metric,
                        std::size_t grid_width);

/// Human-readable form of a rendering (exemplar tables).
std::string rendering_display(const SisRendering& r, MetricKind metric);

struct ExemplarCount {
  std::string rendering;
  std::size_t frequency = 0;
};

struct ClusterSummary {
  int id = 0;
  std::size_t size = 0;
  std::vector<ExemplarCount> top_exemplars;
  std::map<std::string, double> composition;  // source tag -> percent
};

struct ClusterReport {
  std::vector<int> assignments;  // kNoise marks noise
  std::vector<ClusterSummary> clusters;
  double eps = 0.0;
  std::size_t min_pts = 0;
  std::string metric;
};

void to_json(nlohmann::json& j, const ClusterReport& v);

/// DBSCAN over the population with the given metric; summaries carry the
/// four most frequent exemplars per cluster and the per-source composition
/// percentages (summing to 100 per cluster).
ClusterReport cluster_population(const std::vector<SisPopulationItem>& items,
                                 MetricKind metric, double eps,
                                 std::size_t min_pts);

struct CrossModelPrediction {
  double fraction_sufficient = 0.0;
  std::vector<double> scores;
};

/// Scores another model on materialized x_S for each (input, SIS) pair and
/// reports the fraction meeting the threshold.
CrossModelPrediction cross_model_predict(
    const Evaluator& model,
    const std::vector<std::pair<const FeatureInput*,
                                const SufficientInputSubset*>>& items,
    const ImputationBaseline& baseline, double tau);

}  // namespace sistk
