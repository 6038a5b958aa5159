#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sistk/evaluator.hpp"
#include "sistk/types.hpp"

namespace sistk {

/// Base for the built-in analytic models. Scoring a batch is a data-parallel
/// loop over score_one(); the OpenMP kernel in evaluate() and the serial
/// reference in evaluate_serial() must produce bit-identical output.
class BuiltinModel : public Evaluator {
 public:
  std::vector<double> evaluate(
      const std::vector<FeatureInput>& batch) const override;

  /// Serial reference path, kept for the kernel-equivalence tests.
  std::vector<double> evaluate_serial(
      const std::vector<FeatureInput>& batch) const;

  virtual double score_one(const FeatureInput& x) const = 0;

  /// Checks parameter dimensions against a dataset exemplar; throws
  /// std::invalid_argument naming the mismatch.
  virtual void validate_schema(const FeatureInput& exemplar) const = 0;

  virtual std::string kind() const = 0;
};

enum class LinkFunction { Identity, Logistic };

LinkFunction link_from_string(const std::string& s);
double apply_link(LinkFunction link, double u);

/// f(x) = g(sum_i <w_i, x_i> + intercept).
class GlmModel : public BuiltinModel {
 public:
  GlmModel(std::vector<std::vector<double>> weights, double intercept,
           LinkFunction link);

  double score_one(const FeatureInput& x) const override;
  void validate_schema(const FeatureInput& exemplar) const override;
  std::string kind() const override { return "glm"; }

  const std::vector<std::vector<double>>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  LinkFunction link() const { return link_; }

 private:
  std::vector<std::vector<double>> weights_;
  double intercept_;
  LinkFunction link_;
};

/// One sub-function of a max/min composition: an inner model applied to the
/// features at `subset` positions (re-indexed 0..|subset|-1).
struct SubFunction {
  std::vector<std::size_t> subset;
  std::shared_ptr<BuiltinModel> inner;

  double score(const FeatureInput& x) const;
};

class MaxOfSubfunctionsModel : public BuiltinModel {
 public:
  explicit MaxOfSubfunctionsModel(std::vector<SubFunction> subs);
  double score_one(const FeatureInput& x) const override;
  void validate_schema(const FeatureInput& exemplar) const override;
  std::string kind() const override { return "max_of_subfunctions"; }
  const std::vector<SubFunction>& subfunctions() const { return subs_; }

 private:
  std::vector<SubFunction> subs_;
};

class MinOfSubfunctionsModel : public BuiltinModel {
 public:
  explicit MinOfSubfunctionsModel(std::vector<SubFunction> subs);
  double score_one(const FeatureInput& x) const override;
  void validate_schema(const FeatureInput& exemplar) const override;
  std::string kind() const override { return "min_of_subfunctions"; }
  const std::vector<SubFunction>& subfunctions() const { return subs_; }

 private:
  std::vector<SubFunction> subs_;
};

/// f(x) = exp(-||x_S - c_S||): a detector for a fixed value pattern on a
/// feature subset. Features outside the support are ignored.
class PatternDistanceModel : public BuiltinModel {
 public:
  PatternDistanceModel(std::vector<std::size_t> support,
                       std::vector<std::vector<double>> pattern);
  double score_one(const FeatureInput& x) const override;
  void validate_schema(const FeatureInput& exemplar) const override;
  std::string kind() const override { return "pattern_distance"; }

  const std::vector<std::size_t>& support() const { return support_; }
  const std::vector<std::vector<double>>& pattern() const { return pattern_; }

 private:
  std::vector<std::size_t> support_;
  std::vector<std::vector<double>> pattern_;
};

enum class Activation { Identity, Relu, Tanh, Logistic };

Activation activation_from_string(const std::string& s);

struct MlpLayer {
  // weights[out][in], row-major in the JSON weight file.
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
  Activation activation = Activation::Identity;
};

/// Plain feed-forward network over the concatenated feature vector;
/// final layer must have one output.
class MlpModel : public BuiltinModel {
 public:
  explicit MlpModel(std::vector<MlpLayer> layers);
  double score_one(const FeatureInput& x) const override;
  void validate_schema(const FeatureInput& exemplar) const override;
  std::string kind() const override { return "mlp"; }

 private:
  std::vector<MlpLayer> layers_;
};

/// Motif detector over sequences of 4-dimensional base distributions:
/// logistic(scale * (max over offsets of sum_i log <M_i, x_{off+i}> - bias)).
/// An unknown/masked base (uniform 0.25 vector) contributes log(1/4)
/// regardless of the motif row.
class PwmScoreModel : public BuiltinModel {
 public:
  PwmScoreModel(std::vector<std::vector<double>> matrix, double scale,
                double bias);
  double score_one(const FeatureInput& x) const override;
  void validate_schema(const FeatureInput& exemplar) const override;
  std::string kind() const override { return "pwm_score"; }

  std::size_t motif_length() const { return matrix_.size(); }

 private:
  std::vector<std::vector<double>> matrix_;
  double scale_;
  double bias_;
};

/// Parses an evaluator spec {"kind": ..., "parameters": {...}} and builds the
/// model. Kind "external" spawns the configured subprocess (external_model.hpp).
std::shared_ptr<Evaluator> load_evaluator(const nlohmann::json& spec);

/// Serializes built-in model parameters back to the spec format.
nlohmann::json glm_spec(const std::vector<std::vector<double>>& weights,
                        double intercept, const std::string& link);
nlohmann::json pwm_spec(const std::vector<std::vector<double>>& matrix,
                        double scale, double bias);

/// Closed-form SIS-collection prediction for the analytic model families
/// (glm, max/min of sub-functions, pattern_distance), usable as a test
/// oracle when the family's side-conditions hold for (x, tau, baseline).
/// Each predicted subset is sorted ascending; subsets appear in extraction
/// order. Returns nullopt when the side-conditions fail or the prediction
/// would be sensitive to floating-point ties.
std::optional<std::vector<std::vector<std::size_t>>> analytic_sis_oracle(
    const Evaluator& model, const FeatureInput& x, double tau,
    const ImputationBaseline& baseline);

}  // namespace sistk
