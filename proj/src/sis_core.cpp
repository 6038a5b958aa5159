#include "sistk/sis_core.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sistk {

namespace {

std::vector<double> score_masked_sets(
    const Evaluator& model, const FeatureInput& x,
    const std::vector<std::vector<std::size_t>>& sets,
    const ImputationBaseline& baseline) {
  std::vector<FeatureInput> batch;
  batch.reserve(sets.size());
  for (const auto& s : sets) batch.push_back(materialize(x, s, baseline));
  return evaluate_respecting_capability(model, batch);
}

double score_masked(const Evaluator& model, const FeatureInput& x,
                    const std::vector<std::size_t>& unmasked,
                    const ImputationBaseline& baseline) {
  return score_masked_sets(model, x, {unmasked}, baseline).front();
}

}  // namespace

BackSelectTrace back_select(const Evaluator& model, const FeatureInput& x,
                            const std::vector<std::size_t>& start_set,
                            const ImputationBaseline& baseline) {
  if (start_set.empty())
    throw std::invalid_argument("back_select: empty starting set");
  std::vector<std::size_t> working = start_set;
  std::sort(working.begin(), working.end());
  BackSelectTrace trace;
  trace.removal_order.reserve(working.size());
  trace.score_history.reserve(working.size());
  std::size_t step = 0;
  while (!working.empty()) {
    // One candidate per remaining feature, in ascending index order so the
    // lowest index wins argmax ties.
    std::vector<std::vector<std::size_t>> candidates;
    candidates.reserve(working.size());
    for (std::size_t k = 0; k < working.size(); ++k) {
      std::vector<std::size_t> without;
      without.reserve(working.size() - 1);
      for (std::size_t m = 0; m < working.size(); ++m)
        if (m != k) without.push_back(working[m]);
      candidates.push_back(std::move(without));
    }
    std::vector<double> scores;
    try {
      scores = score_masked_sets(model, x, candidates, baseline);
    } catch (const std::exception& e) {
      throw std::runtime_error("back_select: evaluator failed at step " +
                               std::to_string(step) + ": " + e.what());
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k)
      if (scores[k] > scores[best]) best = k;
    trace.removal_order.push_back(working[best]);
    trace.score_history.push_back(scores[best]);
    working.erase(working.begin() + static_cast<std::ptrdiff_t>(best));
    ++step;
  }
  return trace;
}

std::optional<SufficientInputSubset> find_sis(
    const Evaluator& model, const FeatureInput& x, double tau,
    const std::vector<std::size_t>& removal_order,
    const ImputationBaseline& baseline) {
  if (removal_order.empty())
    throw std::invalid_argument("find_sis: empty removal ordering");
  std::vector<std::size_t> picked;
  std::size_t pos = removal_order.size();
  double score = score_masked(model, x, picked, baseline);
  if (score < tau) {
    while (score < tau) {
      if (pos == 0) return std::nullopt;
      picked.push_back(removal_order[--pos]);
      score = score_masked(model, x, picked, baseline);
    }
  } else {
    // Degenerate case: tau is already met by the fully-masked input. The
    // subset contract requires a nonempty index list, so take the single
    // element the ordering ranks most important.
    picked.push_back(removal_order[--pos]);
    score = score_masked(model, x, picked, baseline);
  }
  SufficientInputSubset sis;
  sis.indices = picked;
  sis.achieved_score = score;
  sis.rank_weights.reserve(picked.size());
  for (std::size_t j = 0; j < picked.size(); ++j)
    sis.rank_weights.push_back(removal_order.size() - 1 - j);
  return sis;
}

SisCollectionResult sis_collection(const Evaluator& model,
                                   const FeatureInput& x, double tau,
                                   const ImputationBaseline& baseline) {
  x.validate();
  SisCollectionResult result;
  result.input_ref = x.source_id;

  const std::size_t p = x.size();
  std::vector<std::size_t> remaining(p);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  const double full_score = score_masked(model, x, remaining, baseline);
  if (full_score < tau) throw DecisionNotMetError(full_score, tau);

  const double empty_score = score_masked(model, x, {}, baseline);
  if (empty_score >= tau) {
    // Default decision: reached even for the average input, so no aspect of
    // this particular x can be singled out as the evidence.
    result.default_decision = true;
    result.residual_score = full_score;
    return result;
  }

  double head_score = full_score;
  while (true) {
    if (head_score < tau) {
      result.residual_score = head_score;
      break;
    }
    BackSelectTrace trace =
        back_select(model, x, remaining, baseline);
    std::optional<SufficientInputSubset> sis =
        find_sis(model, x, tau, trace.removal_order, baseline);
    result.trace.push_back(std::move(trace));
    if (!sis) {
      // Unreachable with a deterministic evaluator: the full remaining set
      // is itself a pop prefix and scored >= tau at the loop head.
      throw std::runtime_error(
          "sis_collection: find_sis exhausted an ordering whose full set met "
          "the threshold; evaluator appears nondeterministic");
    }
    std::vector<std::size_t> next;
    next.reserve(remaining.size() - sis->indices.size());
    for (std::size_t idx : remaining)
      if (std::find(sis->indices.begin(), sis->indices.end(), idx) ==
          sis->indices.end())
        next.push_back(idx);
    remaining = std::move(next);
    result.sis_list.push_back(std::move(*sis));
    if (remaining.empty()) {
      result.residual_score = empty_score;
      break;
    }
    head_score = score_masked(model, x, remaining, baseline);
  }
  return result;
}

SisCollectionResult sis_collection(const Evaluator& model,
                                   const FeatureInput& x,
                                   const DecisionThreshold& threshold,
                                   const ImputationBaseline& baseline) {
  if (threshold.direction == ThresholdDirection::Below) {
    NegatedEvaluator negated(model);
    return sis_collection(negated, x, -threshold.tau, baseline);
  }
  return sis_collection(model, x, threshold.tau, baseline);
}

}  // namespace sistk
