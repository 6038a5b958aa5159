#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "helpers/reference_impls.hpp"
#include "sistk/datagen.hpp"
#include "sistk/models.hpp"

using namespace sistk;

namespace {

Motif near_certain_motif(const std::string& modal) {
  std::vector<std::array<double, 4>> rows;
  const double peak = 1.0 - 3e-10;
  for (char c : modal) {
    std::array<double, 4> row = {1e-10, 1e-10, 1e-10, 1e-10};
    row[std::string("ACGT").find(c)] = peak;
    rows.push_back(row);
  }
  return Motif::from_probabilities(rows);
}

std::string sequence_string(const FeatureInput& x) {
  std::string s;
  for (const auto& t : *x.token_labels) s += t;
  return s;
}

}  // namespace

TEST_CASE("plant_rate 0 records no offsets") {
  const Motif m = near_certain_motif("GATT");
  const PlantedMotifDataset d = gen_planted_motif(50, 12, m, 0.0, 5);
  CHECK(d.inputs.size() == 50);
  for (const auto& label : d.labels) {
    CHECK_FALSE(label.planted);
    CHECK_FALSE(label.offset.has_value());
  }
}

TEST_CASE("plant_rate 1 with a near-certain motif plants the modal string") {
  const Motif m = near_certain_motif("GATTAC");
  const PlantedMotifDataset d = gen_planted_motif(40, 20, m, 1.0, 9);
  for (std::size_t i = 0; i < d.inputs.size(); ++i) {
    REQUIRE(d.labels[i].planted);
    REQUIRE(d.labels[i].offset.has_value());
    const std::string seq = sequence_string(d.inputs[i]);
    CHECK(seq.substr(*d.labels[i].offset, 6) == "GATTAC");
  }
}

TEST_CASE("fixed seeds regenerate identical datasets") {
  const Motif m = near_certain_motif("ACGT");
  const PlantedMotifDataset a = gen_planted_motif(30, 15, m, 0.5, 123);
  const PlantedMotifDataset b = gen_planted_motif(30, 15, m, 0.5, 123);
  REQUIRE(a.inputs.size() == b.inputs.size());
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    CHECK(a.inputs[i].features == b.inputs[i].features);
    CHECK(a.labels[i].planted == b.labels[i].planted);
  }
  const PlantedMotifDataset c = gen_planted_motif(30, 15, m, 0.5, 124);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.inputs.size(); ++i)
    if (a.inputs[i].features != c.inputs[i].features) any_difference = true;
  CHECK(any_difference);
}

TEST_CASE("one-hot encoding matches the token labels") {
  const Motif m = near_certain_motif("AC");
  const PlantedMotifDataset d = gen_planted_motif(10, 8, m, 0.3, 7);
  for (const auto& x : d.inputs) {
    REQUIRE(x.token_labels.has_value());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::size_t base = std::string("ACGT").find((*x.token_labels)[i]);
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(x.features[i][j] == (j == base ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("invalid generation parameters") {
  const Motif m = near_certain_motif("ACGTACGT");
  CHECK_THROWS_AS(gen_planted_motif(5, 4, m, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_planted_motif(5, 10, m, 1.5, 1), std::invalid_argument);
}

TEST_CASE("glm dataset columns are near zero mean") {
  const std::size_t p = 6, n = 4000;
  const GlmDataset d = gen_glm_instances(p, n, "uniform", "identity", 42);
  CHECK(d.inputs.size() == n);
  // Column means concentrate around 0: 3 sigma / sqrt(n) with sigma^2 = 1/3.
  const double bound = 3.0 / std::sqrt(3.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < p; ++i) {
    double mean = 0.0;
    for (const auto& x : d.inputs) mean += x.features[i][0];
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) < bound);
  }
}

TEST_CASE("glm dataset is reproducible and degenerate p=1 works") {
  const GlmDataset a = gen_glm_instances(1, 5, "gaussian", "logistic", 8);
  const GlmDataset b = gen_glm_instances(1, 5, "gaussian", "logistic", 8);
  CHECK(a.model_spec == b.model_spec);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(a.inputs[i].features == b.inputs[i].features);
  CHECK_THROWS_AS(gen_glm_instances(2, 2, "cauchy", "identity", 1),
                  std::invalid_argument);
}

TEST_CASE("pwm model separates planted from unplanted sequences") {
  // Sanity gate before any rationale evaluation on this synthetic family.
  const Motif m = [&] {
    std::vector<std::array<double, 4>> rows;
    for (char c : std::string("GATTACAG")) {
      std::array<double, 4> row = {0.01, 0.01, 0.01, 0.01};
      row[std::string("ACGT").find(c)] = 0.97;
      rows.push_back(row);
    }
    return Motif::from_probabilities(rows);
  }();
  const PlantedMotifDataset d = gen_planted_motif(500, 30, m, 0.5, 77);
  std::vector<std::vector<double>> matrix;
  for (const auto& row : m.rows)
    matrix.push_back({row[0], row[1], row[2], row[3]});
  const PwmScoreModel model(matrix, 4.0, -10.3);
  const std::vector<double> scores = model.evaluate(d.inputs);
  std::vector<bool> positive;
  for (const auto& label : d.labels) positive.push_back(label.planted);
  CHECK(testing::auc(scores, positive) > 0.95);
}
