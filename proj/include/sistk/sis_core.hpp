#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sistk/evaluator.hpp"
#include "sistk/types.hpp"

namespace sistk {

/// Thrown by sis_collection when the input does not meet the decision
/// criterion f(x) >= tau in the first place.
class DecisionNotMetError : public std::runtime_error {
 public:
  DecisionNotMetError(double score, double tau)
      : std::runtime_error("decision criterion not met: score " +
                           std::to_string(score) + " < tau " +
                           std::to_string(tau)),
        score(score),
        tau(tau) {}
  double score;
  double tau;
};

/// Greedy backward elimination over `start_set`: repeatedly masks the
/// feature whose removal keeps the score highest, until the set is empty.
/// Removal always runs to completion (no early stop at threshold crossings:
/// the score history may dip and recover). The candidate evaluations of each
/// step go out as a single batch of |S| masked inputs when the evaluator is
/// batch capable; ties in the argmax go to the lowest feature index.
BackSelectTrace back_select(const Evaluator& model, const FeatureInput& x,
                            const std::vector<std::size_t>& start_set,
                            const ImputationBaseline& baseline);

/// Builds a subset by popping indices off the end of `removal_order`
/// (last-removed first) until f(x_S) >= tau. Returns nullopt when the
/// ordering is exhausted without reaching tau. The sufficiency check
/// precedes each pop; if the fully-masked input already clears tau, the
/// single first-popped element is returned so the subset is never empty.
std::optional<SufficientInputSubset> find_sis(
    const Evaluator& model, const FeatureInput& x, double tau,
    const std::vector<std::size_t>& removal_order,
    const ImputationBaseline& baseline);

/// The full extraction loop: back_select + find_sis on the shrinking
/// remaining set until the leftover features no longer meet the threshold.
/// Requires f(x) >= tau (DecisionNotMetError otherwise). When the fully
/// masked input already clears tau the result is an empty collection with
/// default_decision set: such a decision would be reached for the average
/// input and carries no example-specific evidence.
SisCollectionResult sis_collection(const Evaluator& model,
                                   const FeatureInput& x, double tau,
                                   const ImputationBaseline& baseline);

/// Direction-aware wrapper: scores are negated at the evaluator boundary
/// for "below" thresholds, so the result's scores are in the canonical
/// orientation (score >= effective tau).
SisCollectionResult sis_collection(const Evaluator& model,
                                   const FeatureInput& x,
                                   const DecisionThreshold& threshold,
                                   const ImputationBaseline& baseline);

/// Effective tau after direction canonicalization.
inline double effective_tau(const DecisionThreshold& t) {
  return t.direction == ThresholdDirection::Below ? -t.tau : t.tau;
}

}  // namespace sistk
