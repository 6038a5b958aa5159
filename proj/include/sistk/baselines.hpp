#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sistk/evaluator.hpp"
#include "sistk/types.hpp"

namespace sistk {

/// Externally computed per-feature attribution scores (integrated gradients,
/// LIME, ...). Magnitude summarization has already happened upstream; this
/// toolkit only consumes the numbers.
struct AttributionScores {
  std::string input_ref;
  std::vector<double> scores;
};

void to_json(nlohmann::json& j, const AttributionScores& v);
void from_json(const nlohmann::json& j, AttributionScores& v);

/// Marginal feature importances f(x) - f(x \ {i}), computed in a single
/// batch of p+1 evaluations.
std::vector<double> perturbation_importance(const Evaluator& model,
                                            const FeatureInput& x,
                                            const ImputationBaseline& baseline);

/// Ordering R for FindSIS-style assembly from marginal importances: least
/// important first (popped last), ties to the lowest index.
std::vector<std::size_t> perturbation_ordering(
    const Evaluator& model, const FeatureInput& x,
    const ImputationBaseline& baseline);

/// Same ordering convention applied to external attribution scores.
std::vector<std::size_t> attribution_ordering(const AttributionScores& scores);

/// FindSIS over the given ordering, tagged with the ordering's method.
/// When the ordering is exhausted without reaching tau the rationale keeps
/// all features and records sufficiency_met = false (not an error).
Rationale assemble_sufficiency(const Evaluator& model, const FeatureInput& x,
                               double tau,
                               const std::vector<std::size_t>& ordering,
                               const ImputationBaseline& baseline,
                               RationaleMethod tag);

/// Top-k features of the ordering (pop order). Sufficiency is evaluated and
/// recorded but not enforced. k must lie in [1, p].
Rationale assemble_length_constrained(const Evaluator& model,
                                      const FeatureInput& x, double tau,
                                      const std::vector<std::size_t>& ordering,
                                      std::size_t k,
                                      const ImputationBaseline& baseline,
                                      RationaleMethod tag);

/// Attribution-budget ("Top") assembly: features enter in descending score
/// order until the cumulative attribution reaches tau - zero_ref_score
/// (inclusive boundary). A non-positive budget yields the single top-scoring
/// feature; an unreachable budget yields all features. Sufficiency is
/// evaluated against the run's masking baseline, never enforced.
Rationale assemble_attribution_budget(const Evaluator& model,
                                      const FeatureInput& x, double tau,
                                      const AttributionScores& scores,
                                      double zero_ref_score,
                                      const ImputationBaseline& baseline);

/// Which per-example SIS statistic fixes k for the length-constrained
/// methods: the median SIS length (default) or the first SIS's length.
enum class LengthSource { MedianSis, FirstSis };

/// k for length-constrained assembly, from an extraction result. Returns 0
/// when the result has no SIS to take a length from.
std::size_t length_from_sis(const SisCollectionResult& result,
                            LengthSource source);

}  // namespace sistk
