#include "sistk/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace sistk {

void FeatureInput::validate() const {
  if (features.empty())
    throw std::invalid_argument("FeatureInput: p must be >= 1");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].empty())
      throw std::invalid_argument("FeatureInput: feature " +
                                  std::to_string(i) + " has dimension 0");
  }
  if (token_labels && token_labels->size() != features.size())
    throw std::invalid_argument(
        "FeatureInput: token_labels length " +
        std::to_string(token_labels->size()) + " != p = " +
        std::to_string(features.size()));
}

const std::vector<double>& ImputationBaseline::mask_for(std::size_t i) const {
  if (broadcast) return mask_vectors.front();
  if (i >= mask_vectors.size())
    throw std::out_of_range("ImputationBaseline: no mask vector for index " +
                            std::to_string(i));
  return mask_vectors[i];
}

void ImputationBaseline::validate() const {
  if (mask_vectors.empty())
    throw std::invalid_argument("ImputationBaseline: no mask vectors");
  if (broadcast && mask_vectors.size() != 1)
    throw std::invalid_argument(
        "ImputationBaseline: broadcast baseline must hold exactly one vector");
  for (std::size_t i = 0; i < mask_vectors.size(); ++i) {
    if (mask_vectors[i].empty())
      throw std::invalid_argument("ImputationBaseline: mask vector " +
                                  std::to_string(i) + " has dimension 0");
  }
}

const char* to_string(RationaleMethod m) {
  switch (m) {
    case RationaleMethod::Sis: return "sis";
    case RationaleMethod::SuffPerturb: return "suff_perturb";
    case RationaleMethod::PerturbLen: return "perturb_len";
    case RationaleMethod::SuffAttrib: return "suff_attrib";
    case RationaleMethod::AttribLen: return "attrib_len";
    case RationaleMethod::TopAttrib: return "top_attrib";
    case RationaleMethod::Human: return "human";
  }
  return "unknown";
}

RationaleMethod rationale_method_from_string(const std::string& s) {
  if (s == "sis") return RationaleMethod::Sis;
  if (s == "suff_perturb") return RationaleMethod::SuffPerturb;
  if (s == "perturb_len") return RationaleMethod::PerturbLen;
  if (s == "suff_attrib") return RationaleMethod::SuffAttrib;
  if (s == "attrib_len") return RationaleMethod::AttribLen;
  if (s == "top_attrib") return RationaleMethod::TopAttrib;
  if (s == "human") return RationaleMethod::Human;
  throw std::invalid_argument("unknown rationale method: " + s);
}

FeatureInput materialize(const FeatureInput& base,
                         const std::vector<std::size_t>& unmasked_set,
                         const ImputationBaseline& baseline) {
  const std::size_t p = base.size();
  std::vector<bool> keep(p, false);
  for (std::size_t idx : unmasked_set) {
    if (idx >= p)
      throw std::invalid_argument("materialize: index " + std::to_string(idx) +
                                  " outside input of size " +
                                  std::to_string(p));
    keep[idx] = true;
  }
  FeatureInput out;
  out.source_id = base.source_id;
  out.token_labels = base.token_labels;
  out.features.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (keep[i]) {
      out.features[i] = base.features[i];
    } else {
      const std::vector<double>& z = baseline.mask_for(i);
      if (z.size() != base.features[i].size())
        throw std::invalid_argument(
            "materialize: mask dimension " + std::to_string(z.size()) +
            " != feature dimension " + std::to_string(base.features[i].size()) +
            " at index " + std::to_string(i));
      out.features[i] = z;
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const FeatureInput& v) {
  j = nlohmann::json{{"features", v.features}, {"source_id", v.source_id}};
  if (v.token_labels) j["token_labels"] = *v.token_labels;
}

void from_json(const nlohmann::json& j, FeatureInput& v) {
  j.at("features").get_to(v.features);
  j.at("source_id").get_to(v.source_id);
  if (j.contains("token_labels"))
    v.token_labels = j.at("token_labels").get<std::vector<std::string>>();
  else
    v.token_labels.reset();
  v.validate();
}

void to_json(nlohmann::json& j, const ImputationBaseline& v) {
  j = nlohmann::json{{"mask_vectors", v.mask_vectors},
                     {"schema_id", v.schema_id},
                     {"broadcast", v.broadcast}};
}

void from_json(const nlohmann::json& j, ImputationBaseline& v) {
  j.at("mask_vectors").get_to(v.mask_vectors);
  j.at("schema_id").get_to(v.schema_id);
  v.broadcast = j.value("broadcast", false);
  v.validate();
}

void to_json(nlohmann::json& j, const MaskedInput& v) {
  j = nlohmann::json{{"base", v.base}, {"unmasked_set", v.unmasked_set}};
}

void from_json(const nlohmann::json& j, MaskedInput& v) {
  j.at("base").get_to(v.base);
  j.at("unmasked_set").get_to(v.unmasked_set);
  for (std::size_t idx : v.unmasked_set)
    if (idx >= v.base.size())
      throw std::invalid_argument("MaskedInput: index " + std::to_string(idx) +
                                  " outside input of size " +
                                  std::to_string(v.base.size()));
}

void to_json(nlohmann::json& j, const DecisionThreshold& v) {
  j = nlohmann::json{
      {"tau", v.tau},
      {"direction", v.direction == ThresholdDirection::Above ? "above" : "below"}};
}

void from_json(const nlohmann::json& j, DecisionThreshold& v) {
  j.at("tau").get_to(v.tau);
  const std::string d = j.value("direction", "above");
  if (d == "above") v.direction = ThresholdDirection::Above;
  else if (d == "below") v.direction = ThresholdDirection::Below;
  else throw std::invalid_argument("unknown threshold direction: " + d);
}

void to_json(nlohmann::json& j, const SufficientInputSubset& v) {
  j = nlohmann::json{{"indices", v.indices},
                     {"achieved_score", v.achieved_score}};
  if (!v.rank_weights.empty()) j["rank_weights"] = v.rank_weights;
}

void from_json(const nlohmann::json& j, SufficientInputSubset& v) {
  j.at("indices").get_to(v.indices);
  j.at("achieved_score").get_to(v.achieved_score);
  if (j.contains("rank_weights"))
    j.at("rank_weights").get_to(v.rank_weights);
  else
    v.rank_weights.clear();
}

void to_json(nlohmann::json& j, const BackSelectTrace& v) {
  j = nlohmann::json{{"removal_order", v.removal_order},
                     {"score_history", v.score_history}};
}

void from_json(const nlohmann::json& j, BackSelectTrace& v) {
  j.at("removal_order").get_to(v.removal_order);
  j.at("score_history").get_to(v.score_history);
}

void to_json(nlohmann::json& j, const SisCollectionResult& v) {
  j = nlohmann::json{{"input_ref", v.input_ref},
                     {"sis_list", v.sis_list},
                     {"residual_score", v.residual_score},
                     {"trace", v.trace},
                     {"default_decision", v.default_decision}};
}

void from_json(const nlohmann::json& j, SisCollectionResult& v) {
  j.at("input_ref").get_to(v.input_ref);
  j.at("sis_list").get_to(v.sis_list);
  j.at("residual_score").get_to(v.residual_score);
  j.at("trace").get_to(v.trace);
  v.default_decision = j.value("default_decision", false);
}

void to_json(nlohmann::json& j, const Rationale& v) {
  j = nlohmann::json{{"method_tag", to_string(v.method_tag)},
                     {"indices", v.indices},
                     {"achieved_score", v.achieved_score},
                     {"sufficiency_met", v.sufficiency_met}};
}

void from_json(const nlohmann::json& j, Rationale& v) {
  v.method_tag = rationale_method_from_string(j.at("method_tag").get<std::string>());
  j.at("indices").get_to(v.indices);
  j.at("achieved_score").get_to(v.achieved_score);
  j.at("sufficiency_met").get_to(v.sufficiency_met);
}

}  // namespace sistk
