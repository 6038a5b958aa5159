#include "sistk/evaluator.hpp"

namespace sistk {

std::vector<double> evaluate_respecting_capability(
    const Evaluator& model, const std::vector<FeatureInput>& batch) {
  if (model.batch_capable()) return model.evaluate(batch);
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& x : batch)
    out.push_back(model.evaluate(std::vector<FeatureInput>{x}).front());
  return out;
}

}  // namespace sistk
