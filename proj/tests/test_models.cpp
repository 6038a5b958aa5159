#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "helpers/generators.hpp"
#include "sistk/models.hpp"
#include "sistk/rng.hpp"

using namespace sistk;
using testing::scalar_baseline;
using testing::scalar_input;

TEST_CASE("glm computes g(w.x + b)") {
  const GlmModel glm({{1.0}, {-1.0}}, 0.0, LinkFunction::Identity);
  CHECK(glm.score_one(scalar_input({2.0, 3.0})) == -1.0);
  const GlmModel logistic_glm({{1.0}}, 0.0, LinkFunction::Logistic);
  CHECK(logistic_glm.score_one(scalar_input({0.0})) == 0.5);
}

TEST_CASE("pattern distance peaks at the pattern") {
  const PatternDistanceModel model({0, 2}, {{1.0}, {-1.0}});
  CHECK(model.score_one(scalar_input({1.0, 99.0, -1.0})) == 1.0);
  // Distance sqrt(4) = 2 away.
  CHECK(model.score_one(scalar_input({1.0, 0.0, 1.0})) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("mlp with identity activations composes affine maps") {
  MlpLayer l1;
  l1.weights = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  l1.bias = {0.5, -0.5, 0.0};
  l1.activation = Activation::Identity;
  MlpLayer l2;
  l2.weights = {{1.0, 2.0, 3.0}};
  l2.bias = {1.0};
  l2.activation = Activation::Identity;
  const MlpModel mlp({l1, l2});
  // Hidden: [2.5, 2.5, 5]; output: 2.5 + 5 + 15 + 1 = 23.5.
  CHECK(mlp.score_one(scalar_input({2.0, 3.0})) == 23.5);
}

TEST_CASE("max and min compositions") {
  std::vector<SubFunction> subs(2);
  subs[0].subset = {0, 1};
  subs[0].inner = std::make_shared<GlmModel>(
      std::vector<std::vector<double>>{{1.0}, {1.0}}, 0.0,
      LinkFunction::Identity);
  subs[1].subset = {2};
  subs[1].inner = std::make_shared<GlmModel>(
      std::vector<std::vector<double>>{{2.0}}, 0.0, LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.0, 2.0, 4.0});
  CHECK(MaxOfSubfunctionsModel(subs).score_one(x) == 8.0);
  CHECK(MinOfSubfunctionsModel(subs).score_one(x) == 3.0);
  std::vector<SubFunction> overlapping = subs;
  overlapping[1].subset = {1};
  CHECK_THROWS_WITH_AS((MaxOfSubfunctionsModel{overlapping}),
                       doctest::Contains("overlap"), std::invalid_argument);
}

TEST_CASE("pwm score follows the best alignment likelihood") {
  // Motif strongly preferring "AC".
  const std::vector<std::vector<double>> matrix = {{0.97, 0.01, 0.01, 0.01},
                                                   {0.01, 0.97, 0.01, 0.01}};
  const double scale = 2.0, bias = -1.0;
  const PwmScoreModel model(matrix, scale, bias);
  FeatureInput x;
  x.source_id = "seq";
  x.features = {{0.0, 0.0, 1.0, 0.0},   // G
                {1.0, 0.0, 0.0, 0.0},   // A
                {0.0, 1.0, 0.0, 0.0},   // C
                {0.25, 0.25, 0.25, 0.25}};  // masked
  // Offsets: GA, AC, C+mask. Best is AC at offset 1.
  const double ll_best = std::log(0.97) + std::log(0.97);
  const double expected = 1.0 / (1.0 + std::exp(-scale * (ll_best - bias)));
  CHECK(model.score_one(x) == doctest::Approx(expected).epsilon(1e-12));

  // A masked base scores log(1/4) under any row: sequence of two masks.
  FeatureInput masked;
  masked.source_id = "m";
  masked.features = {{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}};
  const double row0_mass =
      0.25 * (matrix[0][0] + matrix[0][1] + matrix[0][2] + matrix[0][3]);
  const double row1_mass =
      0.25 * (matrix[1][0] + matrix[1][1] + matrix[1][2] + matrix[1][3]);
  const double ll_masked = std::log(row0_mass) + std::log(row1_mass);
  const double expected_masked =
      1.0 / (1.0 + std::exp(-scale * (ll_masked - bias)));
  CHECK(model.score_one(masked) == doctest::Approx(expected_masked).epsilon(1e-12));
}

TEST_CASE("model validation errors") {
  CHECK_THROWS_AS(link_from_string("softmax"), std::invalid_argument);
  CHECK_THROWS_AS(activation_from_string("gelu"), std::invalid_argument);
  const GlmModel glm({{1.0}, {1.0}}, 0.0, LinkFunction::Identity);
  CHECK_THROWS_WITH_AS(glm.score_one(scalar_input({1.0})),
                       doctest::Contains("expected 2"), std::invalid_argument);
  CHECK_THROWS_AS(PwmScoreModel({{0.5, 0.5, 0.0, 0.0}}, 1.0, 0.0),
                  std::invalid_argument);  // zero entry
  CHECK_THROWS_AS(MlpModel({}), std::invalid_argument);
}

TEST_CASE("evaluate is pure and order preserving") {
  Rng rng(5);
  std::vector<std::vector<double>> weights;
  for (int i = 0; i < 4; ++i) weights.push_back({rng.next_symmetric()});
  const GlmModel glm(weights, 0.1, LinkFunction::Logistic);
  std::vector<FeatureInput> batch;
  for (int s = 0; s < 10; ++s) {
    std::vector<double> xs(4);
    for (auto& v : xs) v = rng.next_symmetric();
    batch.push_back(scalar_input(xs, std::to_string(s)));
  }
  const std::vector<double> a = glm.evaluate(batch);
  const std::vector<double> b = glm.evaluate(batch);
  CHECK(a == b);
  for (std::size_t i = 0; i < batch.size(); ++i)
    CHECK(a[i] == glm.score_one(batch[i]));
}

TEST_CASE("load_evaluator round trips the spec formats") {
  const nlohmann::json spec = glm_spec({{0.5}, {-2.0}}, 1.5, "identity");
  const auto model = load_evaluator(spec);
  CHECK(model->evaluate({scalar_input({2.0, 1.0})}).front() == 0.5);

  const nlohmann::json pwm = pwm_spec(
      {{0.97, 0.01, 0.01, 0.01}, {0.01, 0.97, 0.01, 0.01}}, 2.0, -1.0);
  const auto pwm_model = load_evaluator(pwm);
  CHECK(dynamic_cast<const PwmScoreModel*>(pwm_model.get()) != nullptr);

  nlohmann::json bad = spec;
  bad["kind"] = "mystery";
  CHECK_THROWS_AS(load_evaluator(bad), std::invalid_argument);
}

TEST_CASE("analytic oracle rejects instances violating side conditions") {
  // Max composition whose sub-function values tie: no strict ordering.
  std::vector<SubFunction> subs(2);
  for (int k = 0; k < 2; ++k) {
    subs[k].subset = {static_cast<std::size_t>(2 * k),
                      static_cast<std::size_t>(2 * k + 1)};
    subs[k].inner = std::make_shared<GlmModel>(
        std::vector<std::vector<double>>{{1.0}, {1.0}}, 0.0,
        LinkFunction::Identity);
  }
  const MaxOfSubfunctionsModel model(subs);
  const FeatureInput x = scalar_input({1.0, 1.0, 1.0, 1.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0, 0.0});
  CHECK_FALSE(analytic_sis_oracle(model, x, 1.5, z).has_value());

  // GLM whose threshold sits above f(x): precondition fails.
  const GlmModel glm({{1.0}}, 0.0, LinkFunction::Identity);
  CHECK_FALSE(
      analytic_sis_oracle(glm, scalar_input({1.0}), 5.0, scalar_baseline({0.0}))
          .has_value());
}

TEST_CASE("analytic oracle matches hand-derived GLM prediction") {
  // Contributions 3, 1, 2 with identity link and tau = 4.5: top-2 needed.
  const GlmModel glm({{3.0}, {1.0}, {2.0}}, 0.0, LinkFunction::Identity);
  const FeatureInput x = scalar_input({1.0, 1.0, 1.0});
  const ImputationBaseline z = scalar_baseline({0.0, 0.0, 0.0});
  const auto predicted = analytic_sis_oracle(glm, x, 4.5, z);
  REQUIRE(predicted.has_value());
  REQUIRE(predicted->size() == 1);  // remaining contribution 1 < 4.5
  CHECK(predicted->front() == std::vector<std::size_t>{0, 2});
}
