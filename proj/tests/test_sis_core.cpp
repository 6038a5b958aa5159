#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers/generators.hpp"
#include "helpers/reference_impls.hpp"
#include "sistk/masking.hpp"
#include "sistk/sis_core.hpp"

using namespace sistk;
using testing::scalar_baseline;
using testing::scalar_input;

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

GlmModel example_glm() {
  return GlmModel({{3.0}, {1.0}, {2.0}}, 0.0, LinkFunction::Logistic);
}

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) {
  return {v.begin(), v.end()};
}

// Re-evaluate the collection's guarantees directly against the model.
void audit_guarantees(const Evaluator& model, const FeatureInput& x,
                        double tau, const ImputationBaseline& z,
                        const SisCollectionResult& result) {
  std::set<std::size_t> used;
  for (const auto& sis : result.sis_list) {
    REQUIRE_FALSE(sis.indices.empty());
    // Criterion (1): the subset alone meets the threshold.
    CHECK(sis.achieved_score >= tau);
    CHECK(model.evaluate({materialize(x, sis.indices, z)}).front() ==
          sis.achieved_score);
    // Disjointness.
    for (std::size_t idx : sis.indices) CHECK(used.insert(idx).second);
    // Per-feature minimality: masking any single member breaks sufficiency.
    for (std::size_t drop : sis.indices) {
      std::vector<std::size_t> without;
      for (std::size_t idx : sis.indices)
        if (idx != drop) without.push_back(idx);
      CHECK(model.evaluate({materialize(x, without, z)}).front() < tau);
    }
  }
  // Path minimality: no shorter pop-prefix of the same sweep reaches tau.
  for (std::size_t k = 0; k < result.sis_list.size(); ++k) {
    const auto& order = result.trace[k].removal_order;
    const auto& sis = result.sis_list[k];
    std::vector<std::size_t> prefix;
    for (std::size_t j = 0; j + 1 < sis.indices.size(); ++j) {
      prefix.push_back(order[order.size() - 1 - j]);
      CHECK(model.evaluate({materialize(x, prefix, z)}).front() < tau);
    }
  }
  // Completeness: the residual no longer meets the threshold.
  if (!result.default_decision) {
    std::vector<std::size_t> residual;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!used.count(i)) residual.push_back(i);
    if (used.size() != x.size())
      CHECK(result.residual_score < tau);
    CHECK(model.evaluate({materialize(x, residual, z)}).front() ==
          result.residual_score);
  }
}

}  // namespace

TEST_CASE("back_select removes ascending contributions on a monotone GLM") {
  const GlmModel glm = example_glm();
  const FeatureInput x = scalar_input({1.0, 1.0, 1.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0});
  const BackSelectTrace trace = back_select(glm, x, {0, 1, 2}, z);
  CHECK(trace.removal_order == std::vector<std::size_t>{1, 2, 0});
  REQUIRE(trace.score_history.size() == 3);
  CHECK(trace.score_history[0] == sigmoid(5.0));
  CHECK(trace.score_history[1] == sigmoid(3.0));
  CHECK(trace.score_history[2] == sigmoid(0.0));
}

TEST_CASE("back_select on a single feature") {
  const GlmModel glm({{2.0}}, 0.0, LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.5});
  const ImputationBaseline z = scalar_baseline({0.0});
  const BackSelectTrace trace = back_select(glm, x, {0}, z);
  CHECK(trace.removal_order == std::vector<std::size_t>{0});
  CHECK(trace.score_history == std::vector<double>{0.0});
}

TEST_CASE("back_select breaks ties by lowest index") {
  const GlmModel constant({{0.0}, {0.0}, {0.0}, {0.0}}, 0.7,
                          LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.0, 2.0, 3.0, 4.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0, 0.0});
  const BackSelectTrace trace = back_select(constant, x, {0, 1, 2, 3}, z);
  CHECK(trace.removal_order == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("find_sis pops most important first until sufficient") {
  const GlmModel glm = example_glm();
  const FeatureInput x = scalar_input({1.0, 1.0, 1.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0});
  const std::vector<std::size_t> order = {1, 2, 0};

  SUBCASE("tau reachable with two features") {
    const auto sis = find_sis(glm, x, sigmoid(5.0), order, z);
    REQUIRE(sis.has_value());
    CHECK(sis->indices == std::vector<std::size_t>{0, 2});
    CHECK(sis->achieved_score == sigmoid(5.0));
    CHECK(sis->rank_weights == std::vector<std::size_t>{2, 1});
  }
  SUBCASE("tau above f(x) is unreachable") {
    CHECK_FALSE(find_sis(glm, x, sigmoid(6.0) + 0.01, order, z).has_value());
  }
  SUBCASE("tau at or below the fully-masked score returns one element") {
    const auto sis = find_sis(glm, x, 0.4, order, z);  // f(empty) = 0.5
    REQUIRE(sis.has_value());
    CHECK(sis->indices == std::vector<std::size_t>{0});
  }
}

TEST_CASE("sis_collection matches the analytic oracle per model family") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    CAPTURE(seed);
    for (int family = 0; family < 4; ++family) {
      CAPTURE(family);
      testing::OracleInstance inst;
      switch (family) {
        case 0: inst = testing::make_glm_instance(seed); break;
        case 1: inst = testing::make_subfunction_instance(seed, true); break;
        case 2: inst = testing::make_subfunction_instance(seed, false); break;
        default: inst = testing::make_pattern_instance(seed); break;
      }
      const SisCollectionResult result =
          sis_collection(*inst.model, inst.x, inst.tau, inst.baseline);
      REQUIRE(result.sis_list.size() == inst.expected.size());
      for (std::size_t k = 0; k < inst.expected.size(); ++k) {
        std::vector<std::size_t> got = result.sis_list[k].indices;
        std::sort(got.begin(), got.end());
        CHECK(got == inst.expected[k]);
      }
      audit_guarantees(*inst.model, inst.x, inst.tau, inst.baseline, result);
    }
  }
}

TEST_CASE("disjunctive detectors yield one SIS per detector, strongest first") {
  // Two detectors, values 2.0 and 1.5; each needs its whole subset to stay
  // above tau = 1.2, and feature 4 is ignored entirely.
  std::vector<SubFunction> subs(2);
  subs[0].subset = {2, 3};
  subs[0].inner = std::make_shared<GlmModel>(
      std::vector<std::vector<double>>{{1.0}, {1.0}}, -0.5,
      LinkFunction::Identity);
  subs[1].subset = {0, 1};
  subs[1].inner = std::make_shared<GlmModel>(
      std::vector<std::vector<double>>{{1.0}, {1.0}}, -0.5,
      LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.25, 1.25, 1.0, 1.0, 7.0});
  const ImputationBaseline z = scalar_baseline({0, 0, 0, 0, 0});
  const double tau = 1.2;
  // Sub values: g({2,3}) = 1.5, g({0,1}) = 2.0; masking any single member
  // drops its sub to at most 0.75.
  {
    const MaxOfSubfunctionsModel max_model(subs);
    const SisCollectionResult r = sis_collection(max_model, x, tau, z);
    REQUIRE(r.sis_list.size() == 2);
    CHECK(as_set(r.sis_list[0].indices) == std::set<std::size_t>{0, 1});
    CHECK(as_set(r.sis_list[1].indices) == std::set<std::size_t>{2, 3});
    CHECK(r.residual_score < tau);
  }
  {
    const MinOfSubfunctionsModel min_model(subs);
    const SisCollectionResult r = sis_collection(min_model, x, tau, z);
    REQUIRE(r.sis_list.size() == 1);
    CHECK(as_set(r.sis_list[0].indices) == std::set<std::size_t>{0, 1, 2, 3});
  }
}

TEST_CASE("pattern detector keeps exactly the features closer than the mask") {
  // Features 0,1 are much closer to the pattern than the mask; feature 2 is
  // slightly farther (negative pull); feature 3 is ignored.
  const PatternDistanceModel model({0, 1, 2}, {{1.0}, {-1.0}, {0.5}});
  const FeatureInput x = scalar_input({1.1, -0.9, 1.2, 3.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 1.0, 0.0});
  // deltas: 1 - 0.01 = 0.99, 1 - 0.01 = 0.99, 0.25 - 0.49 = -0.24.
  const double tau = model.score_one(x);
  const SisCollectionResult r = sis_collection(model, x, tau, z);
  REQUIRE(r.sis_list.size() == 1);
  CHECK(as_set(r.sis_list[0].indices) == std::set<std::size_t>{0, 1});
  const auto oracle = analytic_sis_oracle(model, x, tau, z);
  REQUIRE(oracle.has_value());
  CHECK(oracle->front() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("minimality and completeness hold for non-monotone MLPs") {
  int done = 0;
  for (std::uint64_t seed = 1; done < 12 && seed < 300; ++seed) {
    const auto inst = testing::try_make_mlp_instance(seed);
    if (!inst) continue;
    ++done;
    CAPTURE(seed);
    const SisCollectionResult result =
        sis_collection(*inst->model, inst->x, inst->tau, inst->baseline);
    audit_guarantees(*inst->model, inst->x, inst->tau, inst->baseline,
                     result);
  }
  CHECK(done == 12);
}

TEST_CASE("back_select evaluation counts meet the complexity contract") {
  const testing::OracleInstance inst = testing::make_glm_instance(3);
  const std::size_t p = inst.x.size();

  CountingEvaluator counted(*inst.model);
  const BackSelectTrace batched = back_select(counted, inst.x, [&] {
    std::vector<std::size_t> all(p);
    for (std::size_t i = 0; i < p; ++i) all[i] = i;
    return all;
  }(), inst.baseline);
  CHECK(counted.evaluations() == p * (p + 1) / 2);
  CHECK(counted.rounds() == p);

  // The single-evaluation fallback spends one round per input and must
  // reproduce the batched trace bit for bit.
  NonBatchingEvaluator single(*inst.model);
  CountingEvaluator counted_single(single);
  const BackSelectTrace serial = back_select(counted_single, inst.x, [&] {
    std::vector<std::size_t> all(p);
    for (std::size_t i = 0; i < p; ++i) all[i] = i;
    return all;
  }(), inst.baseline);
  CHECK(counted_single.evaluations() == p * (p + 1) / 2);
  CHECK(counted_single.rounds() == p * (p + 1) / 2);
  CHECK(serial.removal_order == batched.removal_order);
  CHECK(serial.score_history == batched.score_history);

  const SisCollectionResult a =
      sis_collection(*inst.model, inst.x, inst.tau, inst.baseline);
  const SisCollectionResult b =
      sis_collection(single, inst.x, inst.tau, inst.baseline);
  REQUIRE(a.sis_list.size() == b.sis_list.size());
  for (std::size_t k = 0; k < a.sis_list.size(); ++k) {
    CHECK(a.sis_list[k].indices == b.sis_list[k].indices);
    CHECK(a.sis_list[k].achieved_score == b.sis_list[k].achieved_score);
  }
}

TEST_CASE("features the model ignores never enter a SIS") {
  // Pattern model reading only features {1, 3}; 0 and 2 are ignored.
  const PatternDistanceModel model({1, 3}, {{2.0}, {-2.0}});
  const FeatureInput x = scalar_input({5.0, 2.0, -7.0, -2.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0, 0.0});
  const double tau = model.score_one(x);
  const SisCollectionResult result = sis_collection(model, x, tau, z);
  REQUIRE_FALSE(result.sis_list.empty());
  for (const auto& sis : result.sis_list)
    for (std::size_t idx : sis.indices) CHECK((idx == 1 || idx == 3));
}

TEST_CASE("local minimum in backward selection is swept through") {
  // Subset scores chosen so the greedy history dips below tau and recovers:
  // removing 0 keeps 0.72, the {2,3} state drops to 0.65, then {3} alone
  // rebounds to 0.71.
  std::map<std::uint32_t, double> table = {
      {0b1111, 0.9},  {0b1110, 0.72}, {0b1101, 0.5},  {0b1011, 0.5},
      {0b0111, 0.5},  {0b1100, 0.65}, {0b1010, 0.6},  {0b0110, 0.6},
      {0b1000, 0.71}, {0b0100, 0.2},  {0b0010, 0.15}, {0b0001, 0.15},
      {0b1001, 0.6},  {0b0101, 0.6},  {0b0011, 0.6},  {0b0000, 0.1}};
  const testing::SubsetScoreModel model(4, table);
  const FeatureInput x = scalar_input({1.0, 1.0, 1.0, 1.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0, 0.0});
  const double tau = 0.7;

  const BackSelectTrace trace = back_select(model, x, {0, 1, 2, 3}, z);
  CHECK(trace.removal_order == std::vector<std::size_t>{0, 1, 2, 3});
  // The sweep dips below tau and recovers later.
  bool dipped = false, recovered = false;
  for (double s : trace.score_history) {
    if (s < tau) dipped = true;
    else if (dipped) recovered = true;
  }
  CHECK(dipped);
  CHECK(recovered);

  const SisCollectionResult result = sis_collection(model, x, tau, z);
  REQUIRE(result.sis_list.size() == 1);
  CHECK(result.sis_list.front().indices == std::vector<std::size_t>{3});

  const std::vector<std::size_t> early =
      testing::early_stop_rationale(model, x, tau, z);
  CHECK(early.size() == 3);
  CHECK(result.sis_list.front().indices.size() < early.size());
}

TEST_CASE("default decisions produce an empty, flagged collection") {
  const GlmModel glm({{1.0}}, 5.0, LinkFunction::Identity);  // f(empty) = 5
  const FeatureInput x = scalar_input({1.0});
  const ImputationBaseline z = scalar_baseline({0.0});
  const SisCollectionResult result = sis_collection(glm, x, 2.0, z);
  CHECK(result.default_decision);
  CHECK(result.sis_list.empty());
  CHECK(result.residual_score == 6.0);
}

TEST_CASE("inputs failing the decision criterion are rejected") {
  const GlmModel glm({{1.0}}, 0.0, LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.0});
  const ImputationBaseline z = scalar_baseline({0.0});
  CHECK_THROWS_AS(sis_collection(glm, x, 2.0, z), DecisionNotMetError);
}

TEST_CASE("below-direction thresholds run on negated scores") {
  // Decision: f(x) <= -2 with f = -3 at x. Canonical run uses -f >= 2.
  const GlmModel glm({{-3.0}}, 0.0, LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.0});
  const ImputationBaseline z = scalar_baseline({0.0});
  DecisionThreshold below;
  below.tau = -2.0;
  below.direction = ThresholdDirection::Below;
  const SisCollectionResult result = sis_collection(glm, x, below, z);
  REQUIRE(result.sis_list.size() == 1);
  CHECK(result.sis_list.front().indices == std::vector<std::size_t>{0});
  CHECK(result.sis_list.front().achieved_score == 3.0);  // negated f
  CHECK(effective_tau(below) == 2.0);
}

TEST_CASE("GLM collections keep aligned contributions, strongest first") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    CAPTURE(seed);
    const testing::OracleInstance inst = testing::make_glm_instance(seed);
    const auto* glm = dynamic_cast<const GlmModel*>(inst.model.get());
    REQUIRE(glm != nullptr);
    std::vector<double> u(inst.x.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] = glm->weights()[i][0] *
             (inst.x.features[i][0] - inst.baseline.mask_vectors[i][0]);
    const SisCollectionResult result =
        sis_collection(*glm, inst.x, inst.tau, inst.baseline);

    // No SIS contains a feature pulling against the decision.
    for (const auto& sis : result.sis_list)
      for (std::size_t idx : sis.indices) CHECK(u[idx] > 0.0);

    // The first SIS is the top-l contribution set for its own length l.
    REQUIRE_FALSE(result.sis_list.empty());
    const auto first = as_set(result.sis_list.front().indices);
    std::vector<std::size_t> by_u(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) by_u[i] = i;
    std::sort(by_u.begin(), by_u.end(),
              [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
    const std::set<std::size_t> top_l(by_u.begin(),
                                      by_u.begin() + static_cast<std::ptrdiff_t>(
                                                         first.size()));
    CHECK(first == top_l);
  }
}

TEST_CASE("GLM singleton guarantee with nonnegative contributions") {
  // Every feature with g(base + u_i) >= tau must end up as a singleton SIS
  // when no negative contributions drag the loop to an early stop.
  Rng rng(77);
  for (int iter = 0; iter < 20; ++iter) {
    const std::size_t p = 4 + rng.next_below(6);
    std::vector<std::vector<double>> w(p);
    std::vector<double> xs(p), zs(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      w[i] = {0.2 + rng.next_double()};
      xs[i] = 0.2 + rng.next_double();  // positive contributions only
    }
    const GlmModel glm(w, 0.0, LinkFunction::Identity);
    const FeatureInput x = testing::scalar_input(xs);
    const ImputationBaseline z = testing::scalar_baseline(zs);
    std::vector<double> u(p);
    for (std::size_t i = 0; i < p; ++i) u[i] = w[i][0] * xs[i];
    const double tau = *std::max_element(u.begin(), u.end()) * 0.9;
    const SisCollectionResult result = sis_collection(glm, x, tau, z);
    std::size_t expected_singletons = 0;
    for (std::size_t i = 0; i < p; ++i)
      if (u[i] >= tau) ++expected_singletons;
    std::size_t got = 0;
    for (const auto& sis : result.sis_list) {
      if (sis.indices.size() == 1 && u[sis.indices.front()] >= tau) ++got;
    }
    CHECK(got >= expected_singletons);
  }
}
