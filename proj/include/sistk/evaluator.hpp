#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "sistk/types.hpp"

namespace sistk {

/// The black-box scoring boundary. Implementations must be deterministic
/// (identical batches give bitwise-identical outputs) and, unless
/// batch_capable() is false, safe for concurrent read-only use.
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  /// Scores a batch of inputs; output order matches input order.
  virtual std::vector<double> evaluate(
      const std::vector<FeatureInput>& batch) const = 0;

  /// Capability flag. When false, drivers submit inputs one at a time;
  /// results must be bit-identical either way.
  virtual bool batch_capable() const { return true; }

  double evaluate_one(const FeatureInput& x) const {
    return evaluate(std::vector<FeatureInput>{x}).front();
  }
};

/// Negates every score. Used at the evaluator boundary to turn a
/// "below tau" decision into the canonical "score >= tau" form.
class NegatedEvaluator : public Evaluator {
 public:
  explicit NegatedEvaluator(const Evaluator& inner) : inner_(&inner) {}
  std::vector<double> evaluate(
      const std::vector<FeatureInput>& batch) const override {
    std::vector<double> out = inner_->evaluate(batch);
    for (double& s : out) s = -s;
    return out;
  }
  bool batch_capable() const override { return inner_->batch_capable(); }

 private:
  const Evaluator* inner_;
};

/// Counts evaluator traffic: one "round" per evaluate() call, one
/// "evaluation" per input scored. Used by the complexity-contract tests.
class CountingEvaluator : public Evaluator {
 public:
  explicit CountingEvaluator(const Evaluator& inner) : inner_(&inner) {}
  std::vector<double> evaluate(
      const std::vector<FeatureInput>& batch) const override {
    ++rounds_;
    evaluations_ += batch.size();
    return inner_->evaluate(batch);
  }
  bool batch_capable() const override { return inner_->batch_capable(); }

  std::size_t rounds() const { return rounds_; }
  std::size_t evaluations() const { return evaluations_; }
  void reset() { rounds_ = 0; evaluations_ = 0; }

 private:
  const Evaluator* inner_;
  mutable std::size_t rounds_ = 0;
  mutable std::size_t evaluations_ = 0;
};

/// Adapter that declares the single-evaluation capability, forcing drivers
/// onto their non-batched path.
class NonBatchingEvaluator : public Evaluator {
 public:
  explicit NonBatchingEvaluator(const Evaluator& inner) : inner_(&inner) {}
  std::vector<double> evaluate(
      const std::vector<FeatureInput>& batch) const override {
    return inner_->evaluate(batch);
  }
  bool batch_capable() const override { return false; }

 private:
  const Evaluator* inner_;
};

/// Scores `batch` honouring the evaluator's batch capability: one call for
/// batch-capable evaluators, |batch| single calls otherwise.
std::vector<double> evaluate_respecting_capability(
    const Evaluator& model, const std::vector<FeatureInput>& batch);

}  // namespace sistk
