#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sistk/evaluation.hpp"
#include "sistk/types.hpp"

namespace sistk {

struct SequenceLabel {
  std::string source_id;
  bool planted = false;
  std::optional<std::size_t> offset;
};

void to_json(nlohmann::json& j, const SequenceLabel& v);
void from_json(const nlohmann::json& j, SequenceLabel& v);

struct PlantedMotifDataset {
  std::vector<FeatureInput> inputs;  // one-hot base vectors + token_labels
  std::vector<SequenceLabel> labels;
};

/// Uniform-random DNA sequences; with probability plant_rate a sample of the
/// motif (rows drawn independently) replaces the bases at a uniform offset.
/// Draw order per sequence is pinned (seq_len base draws, one plant draw,
/// then offset and row draws when planting) so a fixed seed reproduces the
/// dataset byte-identically.
PlantedMotifDataset gen_planted_motif(std::size_t n, std::size_t seq_len,
                                      const Motif& motif, double plant_rate,
                                      std::uint64_t seed);

struct GlmDataset {
  std::vector<FeatureInput> inputs;  // p scalar features each
  nlohmann::json model_spec;
};

/// Zero-mean scalar feature draws (uniform on [-1, 1)) with a matching GLM
/// spec. weight_law picks the coefficient distribution: "uniform" on [-1, 1)
/// or "gaussian". Draw order: p weights, then p values per input.
GlmDataset gen_glm_instances(std::size_t p, std::size_t n,
                             const std::string& weight_law,
                             const std::string& link, std::uint64_t seed);

}  // namespace sistk
