#include "sistk/clustering.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sistk {

SisRendering render_sis(const SufficientInputSubset& sis,
                        const FeatureInput& input, MetricKind metric,
                        std::size_t grid_width) {
  SisRendering r;
  std::vector<std::size_t> sorted = sis.indices;
  std::sort(sorted.begin(), sorted.end());
  switch (metric) {
    case MetricKind::Levenshtein: {
      if (!input.token_labels)
        throw std::invalid_argument(
            "render_sis: levenshtein rendering needs token_labels");
      for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (k > 0 && sorted[k] != sorted[k - 1] + 1) r.symbols += '-';
        r.symbols += (*input.token_labels)[sorted[k]];
      }
      break;
    }
    case MetricKind::Jaccard: {
      if (!input.token_labels)
        throw std::invalid_argument(
            "render_sis: jaccard rendering needs token_labels");
      for (std::size_t idx : sorted)
        r.tokens.push_back((*input.token_labels)[idx]);
      break;
    }
    case MetricKind::Energy: {
      for (std::size_t idx : sorted) {
        if (grid_width > 0)
          r.coords.push_back({static_cast<double>(idx / grid_width),
                              static_cast<double>(idx % grid_width)});
        else
          r.coords.push_back({static_cast<double>(idx), 0.0});
      }
      break;
    }
  }
  return r;
}

std::string rendering_display(const SisRendering& r, MetricKind metric) {
  switch (metric) {
    case MetricKind::Levenshtein:
      return r.symbols;
    case MetricKind::Jaccard: {
      std::string out;
      for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += r.tokens[i];
      }
      return out;
    }
    case MetricKind::Energy: {
      std::string out;
      for (std::size_t i = 0; i < r.coords.size(); ++i) {
        if (i > 0) out += ' ';
        out += "(" + std::to_string(static_cast<long long>(r.coords[i][0])) +
               "," + std::to_string(static_cast<long long>(r.coords[i][1])) +
               ")";
      }
      return out;
    }
  }
  return {};
}

ClusterReport cluster_population(const std::vector<SisPopulationItem>& items,
                                 MetricKind metric, double eps,
                                 std::size_t min_pts) {
  if (items.empty())
    throw std::invalid_argument("cluster_population: empty population");
  std::vector<SisRendering> renderings;
  renderings.reserve(items.size());
  for (const auto& it : items) renderings.push_back(it.rendering);
  const std::vector<double> dist = pairwise_distances(renderings, metric);

  ClusterReport report;
  report.eps = eps;
  report.min_pts = min_pts;
  report.metric = to_string(metric);
  report.assignments =
      dbscan_labels(dist, items.size(), DbscanParams{eps, min_pts});

  int n_clusters = 0;
  for (int label : report.assignments)
    n_clusters = std::max(n_clusters, label + 1);

  for (int c = 0; c < n_clusters; ++c) {
    ClusterSummary summary;
    summary.id = c;
    std::map<std::string, std::size_t> exemplar_counts;
    std::map<std::string, std::size_t> source_counts;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (report.assignments[i] != c) continue;
      ++summary.size;
      ++exemplar_counts[items[i].display];
      ++source_counts[items[i].source_model_tag];
    }
    std::vector<ExemplarCount> ranked;
    for (const auto& [text, count] : exemplar_counts)
      ranked.push_back({text, count});
    std::sort(ranked.begin(), ranked.end(),
              [](const ExemplarCount& a, const ExemplarCount& b) {
                if (a.frequency != b.frequency) return a.frequency > b.frequency;
                return a.rendering < b.rendering;
              });
    if (ranked.size() > 4) ranked.resize(4);
    summary.top_exemplars = std::move(ranked);
    for (const auto& [tag, count] : source_counts)
      summary.composition[tag] =
          100.0 * static_cast<double>(count) / static_cast<double>(summary.size);
    report.clusters.push_back(std::move(summary));
  }
  return report;
}

void to_json(nlohmann::json& j, const ClusterReport& v) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : v.clusters) {
    nlohmann::json exemplars = nlohmann::json::array();
    for (const auto& e : c.top_exemplars)
      exemplars.push_back({{"rendering", e.rendering},
                           {"frequency", e.frequency}});
    clusters.push_back({{"id", c.id},
                        {"size", c.size},
                        {"top_exemplars", exemplars},
                        {"composition", c.composition}});
  }
  j = nlohmann::json{
      {"assignments", v.assignments},
      {"clusters", clusters},
      {"parameters",
       {{"eps", v.eps}, {"min_pts", v.min_pts}, {"metric", v.metric}}}};
}

CrossModelPrediction cross_model_predict(
    const Evaluator& model,
    const std::vector<std::pair<const FeatureInput*,
                                const SufficientInputSubset*>>& items,
    const ImputationBaseline& baseline, double tau) {
  if (items.empty())
    throw std::invalid_argument("cross_model_predict: no SIS to evaluate");
  std::vector<FeatureInput> batch;
  batch.reserve(items.size());
  for (const auto& [input, sis] : items)
    batch.push_back(materialize(*input, sis->indices, baseline));
  CrossModelPrediction out;
  out.scores = evaluate_respecting_capability(model, batch);
  std::size_t hits = 0;
  for (double s : out.scores)
    if (s >= tau) ++hits;
  out.fraction_sufficient =
      static_cast<double>(hits) / static_cast<double>(items.size());
  return out;
}

}  // namespace sistk
