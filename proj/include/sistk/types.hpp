#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sistk {

/// One input example: an indexable list of feature vectors. Feature i is a
/// real vector whose dimension may vary with i (word embeddings, one-hot
/// bases, plain scalars). Immutable by convention once constructed.
struct FeatureInput {
  std::vector<std::vector<double>> features;
  std::string source_id;
  std::optional<std::vector<std::string>> token_labels;

  std::size_t size() const { return features.size(); }

  /// Throws std::invalid_argument unless p >= 1, every d_i >= 1 and
  /// token_labels (if present) has length p.
  void validate() const;
};

/// Per-feature mask vectors z_i used to represent "this feature is missing".
/// Two layouts:
///   - positional: mask_vectors has one entry per schema position;
///   - broadcast:  mask_vectors has a single entry shared by every position
///     (variable-length inputs, where per-position means are undefined).
struct ImputationBaseline {
  std::vector<std::vector<double>> mask_vectors;
  std::string schema_id;
  bool broadcast = false;

  /// Mask vector for feature index i of an input with p features.
  /// Throws std::out_of_range on a positional baseline shorter than p.
  const std::vector<double>& mask_for(std::size_t i) const;

  void validate() const;
};

/// An input together with the subset of features left unmasked.
/// materialize(base, unmasked_set, baseline) produces the concrete x_S.
struct MaskedInput {
  FeatureInput base;
  std::vector<std::size_t> unmasked_set;
};

/// Decision rule f(x) >= tau. direction == Below means the decision is
/// f(x) <= tau; it is implemented by negating scores at the evaluator
/// boundary so every algorithm in this library assumes "score >= tau".
enum class ThresholdDirection { Above, Below };

struct DecisionThreshold {
  double tau = 0.0;
  ThresholdDirection direction = ThresholdDirection::Above;
};

/// One sufficient input subset. `indices` is ordered by the reverse of the
/// backward-selection removal order (the order FindSIS popped them).
/// rank_weights[j] is the ordinal of indices[j] in the removal ordering,
/// used for display shading (larger = removed later = more important).
struct SufficientInputSubset {
  std::vector<std::size_t> indices;
  double achieved_score = 0.0;
  std::vector<std::size_t> rank_weights;
};

/// Score history of one backward-selection sweep. removal_order is
/// first-removed-first; score_history[t] = f(x_S) after the t-th removal.
struct BackSelectTrace {
  std::vector<std::size_t> removal_order;
  std::vector<double> score_history;
};

/// Complete result of SIS extraction on one input: the disjoint subsets
/// S_1..S_K, the score of the residual features, and the per-iteration
/// backward-selection traces. default_decision marks inputs whose fully
/// masked version already meets the threshold; those get no SIS and their
/// residual_score is f(x) itself.
struct SisCollectionResult {
  std::string input_ref;
  std::vector<SufficientInputSubset> sis_list;
  double residual_score = 0.0;
  std::vector<BackSelectTrace> trace;
  bool default_decision = false;
};

enum class RationaleMethod {
  Sis,
  SuffPerturb,
  PerturbLen,
  SuffAttrib,
  AttribLen,
  TopAttrib,
  Human,
};

const char* to_string(RationaleMethod m);
RationaleMethod rationale_method_from_string(const std::string& s);

/// A feature subset proposed as an explanation by any method.
struct Rationale {
  RationaleMethod method_tag = RationaleMethod::Sis;
  std::vector<std::size_t> indices;
  double achieved_score = 0.0;
  bool sufficiency_met = false;
};

/// Builds the masked input x_S: identical to `base` on S, baseline mask
/// vectors everywhere else. `base` is not modified. Throws
/// std::invalid_argument on an index outside [0, p) or a mask-vector
/// dimension that does not match d_i (the message names the index).
FeatureInput materialize(const FeatureInput& base,
                         const std::vector<std::size_t>& unmasked_set,
                         const ImputationBaseline& baseline);

// JSON serialization. Field names match the struct members; feature
// indices in serialized form are 0-based.
void to_json(nlohmann::json& j, const FeatureInput& v);
void from_json(const nlohmann::json& j, FeatureInput& v);
void to_json(nlohmann::json& j, const ImputationBaseline& v);
void from_json(const nlohmann::json& j, ImputationBaseline& v);
void to_json(nlohmann::json& j, const MaskedInput& v);
void from_json(const nlohmann::json& j, MaskedInput& v);
void to_json(nlohmann::json& j, const DecisionThreshold& v);
void from_json(const nlohmann::json& j, DecisionThreshold& v);
void to_json(nlohmann::json& j, const SufficientInputSubset& v);
void from_json(const nlohmann::json& j, SufficientInputSubset& v);
void to_json(nlohmann::json& j, const BackSelectTrace& v);
void from_json(const nlohmann::json& j, BackSelectTrace& v);
void to_json(nlohmann::json& j, const SisCollectionResult& v);
void from_json(const nlohmann::json& j, SisCollectionResult& v);
void to_json(nlohmann::json& j, const Rationale& v);
void from_json(const nlohmann::json& j, Rationale& v);

}  // namespace sistk
