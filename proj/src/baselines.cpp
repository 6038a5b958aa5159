#include "sistk/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sistk/sis_core.hpp"

namespace sistk {

void to_json(nlohmann::json& j, const AttributionScores& v) {
  j = nlohmann::json{{"input_ref", v.input_ref}, {"scores", v.scores}};
}

void from_json(const nlohmann::json& j, AttributionScores& v) {
  j.at("input_ref").get_to(v.input_ref);
  j.at("scores").get_to(v.scores);
}

std::vector<double> perturbation_importance(
    const Evaluator& model, const FeatureInput& x,
    const ImputationBaseline& baseline) {
  const std::size_t p = x.size();
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<FeatureInput> batch;
  batch.reserve(p + 1);
  batch.push_back(materialize(x, all, baseline));
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<std::size_t> without;
    without.reserve(p - 1);
    for (std::size_t m = 0; m < p; ++m)
      if (m != i) without.push_back(m);
    batch.push_back(materialize(x, without, baseline));
  }
  const std::vector<double> scores =
      evaluate_respecting_capability(model, batch);
  std::vector<double> importance(p);
  for (std::size_t i = 0; i < p; ++i) importance[i] = scores[0] - scores[i + 1];
  return importance;
}

namespace {

std::vector<std::size_t> ascending_order(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return keys[a] < keys[b];
                   });
  return order;
}

}  // namespace

std::vector<std::size_t> perturbation_ordering(
    const Evaluator& model, const FeatureInput& x,
    const ImputationBaseline& baseline) {
  return ascending_order(perturbation_importance(model, x, baseline));
}

std::vector<std::size_t> attribution_ordering(const AttributionScores& scores) {
  return ascending_order(scores.scores);
}

Rationale assemble_sufficiency(const Evaluator& model, const FeatureInput& x,
                               double tau,
                               const std::vector<std::size_t>& ordering,
                               const ImputationBaseline& baseline,
                               RationaleMethod tag) {
  Rationale r;
  r.method_tag = tag;
  const auto sis = find_sis(model, x, tau, ordering, baseline);
  if (sis) {
    r.indices = sis->indices;
    r.achieved_score = sis->achieved_score;
  } else {
    // Exhausted: record the whole ordering as the (insufficient) rationale.
    r.indices = ordering;
    r.achieved_score =
        model.evaluate({materialize(x, ordering, baseline)}).front();
  }
  r.sufficiency_met = r.achieved_score >= tau;
  return r;
}

Rationale assemble_length_constrained(const Evaluator& model,
                                      const FeatureInput& x, double tau,
                                      const std::vector<std::size_t>& ordering,
                                      std::size_t k,
                                      const ImputationBaseline& baseline,
                                      RationaleMethod tag) {
  if (k < 1 || k > ordering.size())
    throw std::invalid_argument("assemble_length_constrained: k = " +
                                std::to_string(k) + " outside [1, " +
                                std::to_string(ordering.size()) + "]");
  Rationale r;
  r.method_tag = tag;
  r.indices.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    r.indices.push_back(ordering[ordering.size() - 1 - j]);
  r.achieved_score =
      model.evaluate({materialize(x, r.indices, baseline)}).front();
  r.sufficiency_met = r.achieved_score >= tau;
  return r;
}

Rationale assemble_attribution_budget(const Evaluator& model,
                                      const FeatureInput& x, double tau,
                                      const AttributionScores& scores,
                                      double zero_ref_score,
                                      const ImputationBaseline& baseline) {
  if (scores.scores.size() != x.size())
    throw std::invalid_argument(
        "assemble_attribution_budget: score count " +
        std::to_string(scores.scores.size()) + " != p = " +
        std::to_string(x.size()));
  std::vector<std::size_t> desc(scores.scores.size());
  std::iota(desc.begin(), desc.end(), std::size_t{0});
  std::stable_sort(desc.begin(), desc.end(), [&](std::size_t a, std::size_t b) {
    return scores.scores[a] > scores.scores[b];
  });

  Rationale r;
  r.method_tag = RationaleMethod::TopAttrib;
  const double budget = tau - zero_ref_score;
  if (budget <= 0.0) {
    // Degenerate budget: an empty rationale says nothing, keep one feature.
    r.indices.push_back(desc.front());
  } else {
    double cum = 0.0;
    for (std::size_t idx : desc) {
      r.indices.push_back(idx);
      cum += scores.scores[idx];
      if (cum >= budget) break;
    }
    // Budget unreachable leaves all features in, which the caller can see
    // from |indices| == p.
  }
  r.achieved_score =
      model.evaluate({materialize(x, r.indices, baseline)}).front();
  r.sufficiency_met = r.achieved_score >= tau;
  return r;
}

std::size_t length_from_sis(const SisCollectionResult& result,
                            LengthSource source) {
  if (result.sis_list.empty()) return 0;
  if (source == LengthSource::FirstSis)
    return result.sis_list.front().indices.size();
  std::vector<std::size_t> lengths;
  lengths.reserve(result.sis_list.size());
  for (const auto& s : result.sis_list) lengths.push_back(s.indices.size());
  std::sort(lengths.begin(), lengths.end());
  // Lower median keeps k integral for even counts.
  return lengths[(lengths.size() - 1) / 2];
}

}  // namespace sistk
