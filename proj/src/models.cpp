#include "sistk/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sistk/external_model.hpp"

namespace sistk {

namespace {

double dot_checked(const std::vector<double>& w, const std::vector<double>& v,
                   std::size_t index) {
  if (w.size() != v.size())
    throw std::invalid_argument(
        "dimension mismatch at feature " + std::to_string(index) +
        ": weight dim " + std::to_string(w.size()) + " vs feature dim " +
        std::to_string(v.size()));
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * v[j];
  return s;
}

double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

std::vector<double> BuiltinModel::evaluate(
    const std::vector<FeatureInput>& batch) const {
  std::vector<double> out(batch.size());
  std::atomic<bool> failed{false};
  std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (batch.size() > 1)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(batch.size());
       ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[static_cast<std::size_t>(i)] =
          score_one(batch[static_cast<std::size_t>(i)]);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(sistk_eval_err)
#endif
      {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> BuiltinModel::evaluate_serial(
    const std::vector<FeatureInput>& batch) const {
  std::vector<double> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out[i] = score_one(batch[i]);
  return out;
}

LinkFunction link_from_string(const std::string& s) {
  if (s == "identity") return LinkFunction::Identity;
  if (s == "logistic") return LinkFunction::Logistic;
  throw std::invalid_argument("unknown link function: " + s);
}

double apply_link(LinkFunction link, double u) {
  switch (link) {
    case LinkFunction::Identity: return u;
    case LinkFunction::Logistic: return logistic(u);
  }
  return u;
}

GlmModel::GlmModel(std::vector<std::vector<double>> weights, double intercept,
                   LinkFunction link)
    : weights_(std::move(weights)), intercept_(intercept), link_(link) {
  if (weights_.empty())
    throw std::invalid_argument("glm: weights must be nonempty");
  for (const auto& w : weights_)
    if (w.empty()) throw std::invalid_argument("glm: empty weight vector");
}

double GlmModel::score_one(const FeatureInput& x) const {
  if (x.size() != weights_.size())
    throw std::invalid_argument("glm: expected " +
                                std::to_string(weights_.size()) +
                                " features, got " + std::to_string(x.size()));
  double u = intercept_;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    u += dot_checked(weights_[i], x.features[i], i);
  return apply_link(link_, u);
}

void GlmModel::validate_schema(const FeatureInput& exemplar) const {
  if (exemplar.size() != weights_.size())
    throw std::invalid_argument(
        "glm: schema has p = " + std::to_string(exemplar.size()) +
        " but model has " + std::to_string(weights_.size()) + " weights");
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i].size() != exemplar.features[i].size())
      throw std::invalid_argument("glm: weight dim mismatch at feature " +
                                  std::to_string(i));
}

double SubFunction::score(const FeatureInput& x) const {
  FeatureInput gathered;
  gathered.features.reserve(subset.size());
  for (std::size_t idx : subset) {
    if (idx >= x.size())
      throw std::invalid_argument("subfunction subset index " +
                                  std::to_string(idx) + " out of range");
    gathered.features.push_back(x.features[idx]);
  }
  return inner->score_one(gathered);
}

namespace {

void validate_subfunctions(const std::vector<SubFunction>& subs) {
  if (subs.empty())
    throw std::invalid_argument("max/min model needs at least one subfunction");
  std::set<std::size_t> seen;
  for (const auto& s : subs) {
    if (s.subset.empty())
      throw std::invalid_argument("subfunction with empty subset");
    if (!s.inner) throw std::invalid_argument("subfunction without inner model");
    for (std::size_t idx : s.subset)
      if (!seen.insert(idx).second)
        throw std::invalid_argument(
            "subfunction subsets overlap at feature " + std::to_string(idx));
  }
}

void validate_subfunction_schema(const std::vector<SubFunction>& subs,
                                 const FeatureInput& exemplar) {
  for (const auto& s : subs) {
    FeatureInput gathered;
    for (std::size_t idx : s.subset) {
      if (idx >= exemplar.size())
        throw std::invalid_argument("subfunction subset index " +
                                    std::to_string(idx) +
                                    " outside schema of size " +
                                    std::to_string(exemplar.size()));
      gathered.features.push_back(exemplar.features[idx]);
    }
    s.inner->validate_schema(gathered);
  }
}

}  // namespace

MaxOfSubfunctionsModel::MaxOfSubfunctionsModel(std::vector<SubFunction> subs)
    : subs_(std::move(subs)) {
  validate_subfunctions(subs_);
}

double MaxOfSubfunctionsModel::score_one(const FeatureInput& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : subs_) best = std::max(best, s.score(x));
  return best;
}

void MaxOfSubfunctionsModel::validate_schema(const FeatureInput& exemplar) const {
  validate_subfunction_schema(subs_, exemplar);
}

MinOfSubfunctionsModel::MinOfSubfunctionsModel(std::vector<SubFunction> subs)
    : subs_(std::move(subs)) {
  validate_subfunctions(subs_);
}

double MinOfSubfunctionsModel::score_one(const FeatureInput& x) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : subs_) worst = std::min(worst, s.score(x));
  return worst;
}

void MinOfSubfunctionsModel::validate_schema(const FeatureInput& exemplar) const {
  validate_subfunction_schema(subs_, exemplar);
}

PatternDistanceModel::PatternDistanceModel(
    std::vector<std::size_t> support, std::vector<std::vector<double>> pattern)
    : support_(std::move(support)), pattern_(std::move(pattern)) {
  if (support_.empty())
    throw std::invalid_argument("pattern_distance: empty support");
  if (support_.size() != pattern_.size())
    throw std::invalid_argument(
        "pattern_distance: support and pattern lengths differ");
  std::set<std::size_t> seen(support_.begin(), support_.end());
  if (seen.size() != support_.size())
    throw std::invalid_argument("pattern_distance: duplicate support index");
}

double PatternDistanceModel::score_one(const FeatureInput& x) const {
  double d2 = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    const std::size_t idx = support_[k];
    if (idx >= x.size())
      throw std::invalid_argument("pattern_distance: support index " +
                                  std::to_string(idx) + " out of range");
    const auto& v = x.features[idx];
    const auto& c = pattern_[k];
    if (v.size() != c.size())
      throw std::invalid_argument(
          "pattern_distance: dimension mismatch at feature " +
          std::to_string(idx));
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double diff = v[j] - c[j];
      d2 += diff * diff;
    }
  }
  return std::exp(-std::sqrt(d2));
}

void PatternDistanceModel::validate_schema(const FeatureInput& exemplar) const {
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k] >= exemplar.size())
      throw std::invalid_argument("pattern_distance: support index " +
                                  std::to_string(support_[k]) +
                                  " outside schema");
    if (pattern_[k].size() != exemplar.features[support_[k]].size())
      throw std::invalid_argument(
          "pattern_distance: pattern dim mismatch at feature " +
          std::to_string(support_[k]));
  }
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::Identity;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "logistic") return Activation::Logistic;
  throw std::invalid_argument("unknown activation: " + s);
}

namespace {

double apply_activation(Activation a, double u) {
  switch (a) {
    case Activation::Identity: return u;
    case Activation::Relu: return u > 0.0 ? u : 0.0;
    case Activation::Tanh: return std::tanh(u);
    case Activation::Logistic: return logistic(u);
  }
  return u;
}

}  // namespace

MlpModel::MlpModel(std::vector<MlpLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("mlp: no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.weights.empty())
      throw std::invalid_argument("mlp: layer " + std::to_string(l) +
                                  " has no rows");
    const std::size_t in_dim = layer.weights.front().size();
    for (const auto& row : layer.weights)
      if (row.size() != in_dim)
        throw std::invalid_argument("mlp: ragged weight matrix in layer " +
                                    std::to_string(l));
    if (layer.bias.size() != layer.weights.size())
      throw std::invalid_argument("mlp: bias size mismatch in layer " +
                                  std::to_string(l));
    if (l + 1 < layers_.size() &&
        layers_[l + 1].weights.front().size() != layer.weights.size())
      throw std::invalid_argument("mlp: layer " + std::to_string(l + 1) +
                                  " input dim does not match layer " +
                                  std::to_string(l) + " output dim");
  }
  if (layers_.back().weights.size() != 1)
    throw std::invalid_argument("mlp: final layer must have one output");
}

double MlpModel::score_one(const FeatureInput& x) const {
  std::vector<double> act;
  for (const auto& f : x.features) act.insert(act.end(), f.begin(), f.end());
  for (const auto& layer : layers_) {
    if (act.size() != layer.weights.front().size())
      throw std::invalid_argument(
          "mlp: input dim " + std::to_string(act.size()) +
          " does not match layer input dim " +
          std::to_string(layer.weights.front().size()));
    std::vector<double> next(layer.weights.size());
    for (std::size_t j = 0; j < layer.weights.size(); ++j) {
      double u = layer.bias[j];
      const auto& row = layer.weights[j];
      for (std::size_t k = 0; k < row.size(); ++k) u += row[k] * act[k];
      next[j] = apply_activation(layer.activation, u);
    }
    act = std::move(next);
  }
  return act.front();
}

void MlpModel::validate_schema(const FeatureInput& exemplar) const {
  std::size_t total = 0;
  for (const auto& f : exemplar.features) total += f.size();
  if (total != layers_.front().weights.front().size())
    throw std::invalid_argument(
        "mlp: schema flattens to dim " + std::to_string(total) +
        " but first layer expects " +
        std::to_string(layers_.front().weights.front().size()));
}

PwmScoreModel::PwmScoreModel(std::vector<std::vector<double>> matrix,
                             double scale, double bias)
    : matrix_(std::move(matrix)), scale_(scale), bias_(bias) {
  if (matrix_.empty()) throw std::invalid_argument("pwm_score: empty matrix");
  for (const auto& row : matrix_) {
    if (row.size() != 4)
      throw std::invalid_argument("pwm_score: rows must have 4 entries");
    for (double v : row)
      if (!(v > 0.0))
        throw std::invalid_argument("pwm_score: matrix entries must be > 0");
  }
}

double PwmScoreModel::score_one(const FeatureInput& x) const {
  const std::size_t n = matrix_.size();
  if (x.size() < n)
    throw std::invalid_argument("pwm_score: sequence length " +
                                std::to_string(x.size()) +
                                " shorter than motif length " +
                                std::to_string(n));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t off = 0; off + n <= x.size(); ++off) {
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = x.features[off + i];
      if (v.size() != 4)
        throw std::invalid_argument(
            "pwm_score: feature " + std::to_string(off + i) +
            " is not a 4-dimensional base vector");
      double d = 0.0;
      for (std::size_t j = 0; j < 4; ++j) d += matrix_[i][j] * v[j];
      if (!(d > 0.0))
        throw std::domain_error("pwm_score: nonpositive base likelihood at " +
                                std::to_string(off + i));
      ll += std::log(d);
    }
    best = std::max(best, ll);
  }
  return logistic(scale_ * (best - bias_));
}

void PwmScoreModel::validate_schema(const FeatureInput& exemplar) const {
  if (exemplar.size() < matrix_.size())
    throw std::invalid_argument("pwm_score: schema shorter than motif");
  for (std::size_t i = 0; i < exemplar.size(); ++i)
    if (exemplar.features[i].size() != 4)
      throw std::invalid_argument("pwm_score: schema feature " +
                                  std::to_string(i) + " is not 4-dimensional");
}

namespace {

std::shared_ptr<BuiltinModel> load_builtin(const nlohmann::json& spec);

std::vector<SubFunction> parse_subfunctions(const nlohmann::json& params) {
  std::vector<SubFunction> subs;
  for (const auto& js : params.at("subfunctions")) {
    SubFunction s;
    js.at("subset").get_to(s.subset);
    s.inner = load_builtin(js.at("inner"));
    subs.push_back(std::move(s));
  }
  return subs;
}

std::shared_ptr<BuiltinModel> load_builtin(const nlohmann::json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  const nlohmann::json& p = spec.at("parameters");
  if (kind == "glm") {
    return std::make_shared<GlmModel>(
        p.at("weights").get<std::vector<std::vector<double>>>(),
        p.at("intercept").get<double>(),
        link_from_string(p.at("link").get<std::string>()));
  }
  if (kind == "max_of_subfunctions")
    return std::make_shared<MaxOfSubfunctionsModel>(parse_subfunctions(p));
  if (kind == "min_of_subfunctions")
    return std::make_shared<MinOfSubfunctionsModel>(parse_subfunctions(p));
  if (kind == "pattern_distance") {
    return std::make_shared<PatternDistanceModel>(
        p.at("support").get<std::vector<std::size_t>>(),
        p.at("pattern").get<std::vector<std::vector<double>>>());
  }
  if (kind == "mlp") {
    std::vector<MlpLayer> layers;
    for (const auto& jl : p.at("layers")) {
      MlpLayer layer;
      jl.at("weights").get_to(layer.weights);
      jl.at("bias").get_to(layer.bias);
      layer.activation =
          activation_from_string(jl.at("activation").get<std::string>());
      layers.push_back(std::move(layer));
    }
    return std::make_shared<MlpModel>(std::move(layers));
  }
  if (kind == "pwm_score") {
    return std::make_shared<PwmScoreModel>(
        p.at("matrix").get<std::vector<std::vector<double>>>(),
        p.at("scale").get<double>(), p.at("bias").get<double>());
  }
  throw std::invalid_argument("unknown built-in evaluator kind: " + kind);
}

}  // namespace

std::shared_ptr<Evaluator> load_evaluator(const nlohmann::json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "external") {
    const nlohmann::json& p = spec.at("parameters");
    ExternalModelConfig cfg;
    p.at("command").get_to(cfg.command);
    cfg.protocol_version = p.value("protocol_version", 1);
    cfg.max_in_flight = p.value("max_in_flight", std::size_t{1});
    return std::make_shared<ExternalModel>(cfg);
  }
  return load_builtin(spec);
}

nlohmann::json glm_spec(const std::vector<std::vector<double>>& weights,
                        double intercept, const std::string& link) {
  return nlohmann::json{{"kind", "glm"},
                        {"parameters",
                         {{"weights", weights},
                          {"intercept", intercept},
                          {"link", link}}}};
}

nlohmann::json pwm_spec(const std::vector<std::vector<double>>& matrix,
                        double scale, double bias) {
  return nlohmann::json{
      {"kind", "pwm_score"},
      {"parameters", {{"matrix", matrix}, {"scale", scale}, {"bias", bias}}}};
}

}  // namespace sistk
