#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "sistk/models.hpp"

// Closed-form SIS-collection predictions for the analytic model families.
// Each predictor first verifies the family's side-conditions with explicit
// numeric margins; instances where the prediction would hinge on a
// floating-point tie are rejected (nullopt) rather than guessed.

namespace sistk {

namespace {

constexpr double kMargin = 1e-9;       // clearance required at every decision
constexpr double kTieGap = 1e-6;       // minimum gap between contributions
constexpr double kLogisticRange = 20;  // |arg| beyond this, doubles saturate

// Per-feature score contribution u_i = <w_i, x_i - z_i> and the argument of
// the fully-masked input. For a GLM, f(x_T) = g(base + sum_{i in T} u_i).
struct GlmDecomposition {
  std::vector<double> u;
  double base = 0.0;
};

GlmDecomposition decompose_glm(const GlmModel& glm, const FeatureInput& x,
                               const ImputationBaseline& baseline) {
  GlmDecomposition d;
  d.base = glm.intercept();
  d.u.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& w = glm.weights()[i];
    const auto& z = baseline.mask_for(i);
    double ui = 0.0, zi = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      ui += w[j] * (x.features[i][j] - z[j]);
      zi += w[j] * z[j];
    }
    d.u[i] = ui;
    d.base += zi;
  }
  return d;
}

bool logistic_safe(LinkFunction link, double arg) {
  return link == LinkFunction::Identity || std::abs(arg) <= kLogisticRange;
}

std::optional<std::vector<std::vector<std::size_t>>> glm_oracle(
    const GlmModel& glm, const FeatureInput& x, double tau,
    const ImputationBaseline& baseline) {
  if (x.size() != glm.weights().size()) return std::nullopt;
  const GlmDecomposition d = decompose_glm(glm, x, baseline);
  const double full_arg = d.base + std::accumulate(d.u.begin(), d.u.end(), 0.0);
  if (!logistic_safe(glm.link(), d.base) || !logistic_safe(glm.link(), full_arg))
    return std::nullopt;
  if (apply_link(glm.link(), full_arg) < tau + kMargin) return std::nullopt;
  if (apply_link(glm.link(), d.base) >= tau - kMargin) return std::nullopt;

  // Reject near-ties between contributions: the extraction order among
  // tied features is index-based and not worth mirroring here.
  std::vector<double> sorted_u = d.u;
  std::sort(sorted_u.begin(), sorted_u.end());
  for (std::size_t i = 1; i < sorted_u.size(); ++i)
    if (sorted_u[i] - sorted_u[i - 1] < kTieGap) return std::nullopt;

  // Mirror the collection loop: pop features by descending contribution,
  // close a subset as soon as the partial sum clears tau.
  std::vector<std::size_t> remaining(x.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> sets;
  while (true) {
    double total = d.base;
    for (std::size_t i : remaining) total += d.u[i];
    if (!logistic_safe(glm.link(), total)) return std::nullopt;
    const double head = apply_link(glm.link(), total);
    if (std::abs(head - tau) < kMargin) return std::nullopt;
    if (head < tau) break;
    std::vector<std::size_t> order = remaining;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (d.u[a] != d.u[b]) return d.u[a] > d.u[b];
      return a > b;
    });
    std::vector<std::size_t> subset;
    double arg = d.base;
    bool closed = false;
    for (std::size_t i : order) {
      arg += d.u[i];
      subset.push_back(i);
      if (!logistic_safe(glm.link(), arg)) return std::nullopt;
      const double v = apply_link(glm.link(), arg);
      if (std::abs(v - tau) < kMargin) return std::nullopt;
      if (v >= tau) {
        closed = true;
        break;
      }
    }
    if (!closed) return std::nullopt;  // cannot happen when head >= tau
    std::sort(subset.begin(), subset.end());
    for (std::size_t i : subset)
      remaining.erase(std::find(remaining.begin(), remaining.end(), i));
    sets.push_back(std::move(subset));
  }
  return sets;
}

// Shared machinery for the max/min compositions. Requires glm inners whose
// per-feature contributions are all positive, which makes every sub-function
// strictly decrease as its features are masked.
struct SubAnalysis {
  std::vector<std::size_t> subset;
  double value_full = 0.0;      // g_k with its whole subset unmasked
  double value_masked = 0.0;    // g_k with its whole subset masked
  double worst_single = 0.0;    // max over i of g_k with only i masked
};

std::optional<std::vector<SubAnalysis>> analyze_subfunctions(
    const std::vector<SubFunction>& subs, const FeatureInput& x,
    const ImputationBaseline& baseline) {
  std::vector<SubAnalysis> out;
  for (const auto& s : subs) {
    const auto* inner = dynamic_cast<const GlmModel*>(s.inner.get());
    if (!inner) return std::nullopt;
    FeatureInput gathered;
    ImputationBaseline gathered_z;
    gathered_z.schema_id = baseline.schema_id;
    gathered_z.broadcast = false;
    for (std::size_t idx : s.subset) {
      if (idx >= x.size()) return std::nullopt;
      gathered.features.push_back(x.features[idx]);
      gathered_z.mask_vectors.push_back(baseline.mask_for(idx));
    }
    const GlmDecomposition d = decompose_glm(*inner, gathered, gathered_z);
    double total = d.base;
    for (double ui : d.u) {
      if (ui < kTieGap) return std::nullopt;  // need strictly positive pull
      total += ui;
    }
    if (!logistic_safe(inner->link(), d.base) ||
        !logistic_safe(inner->link(), total))
      return std::nullopt;
    SubAnalysis a;
    a.subset = s.subset;
    a.value_full = apply_link(inner->link(), total);
    a.value_masked = apply_link(inner->link(), d.base);
    a.worst_single = -std::numeric_limits<double>::infinity();
    for (double ui : d.u)
      a.worst_single = std::max(
          a.worst_single, apply_link(inner->link(), total - ui));
    out.push_back(std::move(a));
  }
  return out;
}

bool subfunction_conditions_hold(const std::vector<SubAnalysis>& subs,
                                 double tau) {
  std::vector<double> values;
  for (const auto& a : subs) {
    if (a.value_full < tau + kMargin) return false;     // g_k >= tau
    if (a.worst_single >= tau - kMargin) return false;  // minimality
    if (a.value_masked >= tau - kMargin) return false;  // inactive at baseline
    values.push_back(a.value_full);
  }
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] - values[i - 1] < kMargin) return false;  // strict order
  return true;
}

std::optional<std::vector<std::vector<std::size_t>>> max_oracle(
    const MaxOfSubfunctionsModel& model, const FeatureInput& x, double tau,
    const ImputationBaseline& baseline) {
  auto subs = analyze_subfunctions(model.subfunctions(), x, baseline);
  if (!subs || !subfunction_conditions_hold(*subs, tau)) return std::nullopt;
  std::sort(subs->begin(), subs->end(),
            [](const SubAnalysis& a, const SubAnalysis& b) {
              return a.value_full > b.value_full;
            });
  std::vector<std::vector<std::size_t>> sets;
  for (auto& a : *subs) {
    std::sort(a.subset.begin(), a.subset.end());
    sets.push_back(a.subset);
  }
  return sets;
}

std::optional<std::vector<std::vector<std::size_t>>> min_oracle(
    const MinOfSubfunctionsModel& model, const FeatureInput& x, double tau,
    const ImputationBaseline& baseline) {
  auto subs = analyze_subfunctions(model.subfunctions(), x, baseline);
  if (!subs || !subfunction_conditions_hold(*subs, tau)) return std::nullopt;
  std::vector<std::size_t> all;
  for (const auto& a : *subs)
    all.insert(all.end(), a.subset.begin(), a.subset.end());
  std::sort(all.begin(), all.end());
  return std::vector<std::vector<std::size_t>>{all};
}

std::optional<std::vector<std::vector<std::size_t>>> pattern_oracle(
    const PatternDistanceModel& model, const FeatureInput& x, double tau,
    const ImputationBaseline& baseline) {
  // The closed form holds for tau equal to f(x) itself.
  if (model.score_one(x) != tau) return std::nullopt;
  // delta_i = ||z_i - c_i||^2 - ||x_i - c_i||^2: positive when the observed
  // value is closer to the pattern than the mask is.
  std::vector<double> delta;
  const auto& support = model.support();
  const auto& pattern = model.pattern();
  for (std::size_t k = 0; k < support.size(); ++k) {
    const std::size_t idx = support[k];
    if (idx >= x.size()) return std::nullopt;
    const auto& v = x.features[idx];
    const auto& z = baseline.mask_for(idx);
    const auto& c = pattern[k];
    if (v.size() != c.size() || z.size() != c.size()) return std::nullopt;
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      a += (v[j] - c[j]) * (v[j] - c[j]);
      b += (z[j] - c[j]) * (z[j] - c[j]);
    }
    delta.push_back(b - a);
  }
  std::vector<std::size_t> positive;
  double neg_mass = 0.0;
  double min_positive = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < delta.size(); ++k) {
    if (delta[k] > kMargin) {
      positive.push_back(support[k]);
      min_positive = std::min(min_positive, delta[k]);
    } else if (delta[k] < -kMargin) {
      neg_mass += -delta[k];
    } else if (delta[k] != 0.0) {
      return std::nullopt;  // too close to zero to call
    }
  }
  if (positive.empty()) return std::nullopt;
  // Every proper prefix of the positive features must remain insufficient,
  // which reduces to the smallest positive pull dominating the negative mass.
  if (min_positive <= neg_mass + kMargin) return std::nullopt;
  std::sort(positive.begin(), positive.end());
  return std::vector<std::vector<std::size_t>>{positive};
}

}  // namespace

std::optional<std::vector<std::vector<std::size_t>>> analytic_sis_oracle(
    const Evaluator& model, const FeatureInput& x, double tau,
    const ImputationBaseline& baseline) {
  if (const auto* glm = dynamic_cast<const GlmModel*>(&model))
    return glm_oracle(*glm, x, tau, baseline);
  if (const auto* mx = dynamic_cast<const MaxOfSubfunctionsModel*>(&model))
    return max_oracle(*mx, x, tau, baseline);
  if (const auto* mn = dynamic_cast<const MinOfSubfunctionsModel*>(&model))
    return min_oracle(*mn, x, tau, baseline);
  if (const auto* pd = dynamic_cast<const PatternDistanceModel*>(&model))
    return pattern_oracle(*pd, x, tau, baseline);
  return std::nullopt;
}

}  // namespace sistk
