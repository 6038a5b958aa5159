#include "sistk/datagen.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sistk/models.hpp"
#include "sistk/rng.hpp"

namespace sistk {

namespace {

constexpr const char* kBases = "ACGT";

std::size_t sample_row(const std::array<double, 4>& row, Rng& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    cum += row[j];
    if (u < cum) return j;
  }
  return 3;
}

std::vector<double> one_hot(std::size_t base) {
  std::vector<double> v(4, 0.0);
  v[base] = 1.0;
  return v;
}

}  // namespace

void to_json(nlohmann::json& j, const SequenceLabel& v) {
  j = nlohmann::json{{"source_id", v.source_id}, {"planted", v.planted}};
  if (v.offset) j["offset"] = *v.offset;
}

void from_json(const nlohmann::json& j, SequenceLabel& v) {
  j.at("source_id").get_to(v.source_id);
  j.at("planted").get_to(v.planted);
  if (j.contains("offset"))
    v.offset = j.at("offset").get<std::size_t>();
  else
    v.offset.reset();
}

PlantedMotifDataset gen_planted_motif(std::size_t n, std::size_t seq_len,
                                      const Motif& motif, double plant_rate,
                                      std::uint64_t seed) {
  if (motif.length() > seq_len)
    throw std::invalid_argument("gen_planted_motif: motif longer than seq_len");
  if (plant_rate < 0.0 || plant_rate > 1.0)
    throw std::invalid_argument("gen_planted_motif: plant_rate outside [0, 1]");
  if (n == 0 || seq_len == 0)
    throw std::invalid_argument("gen_planted_motif: n and seq_len must be >= 1");

  Rng rng(seed);
  PlantedMotifDataset out;
  out.inputs.reserve(n);
  out.labels.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> bases(seq_len);
    for (std::size_t i = 0; i < seq_len; ++i) bases[i] = rng.next_below(4);

    SequenceLabel label;
    label.source_id = "seq-" + std::to_string(s);
    if (rng.next_double() < plant_rate) {
      label.planted = true;
      const std::size_t offset = rng.next_below(seq_len - motif.length() + 1);
      label.offset = offset;
      for (std::size_t i = 0; i < motif.length(); ++i)
        bases[offset + i] = sample_row(motif.rows[i], rng);
    }

    FeatureInput input;
    input.source_id = label.source_id;
    input.features.reserve(seq_len);
    std::vector<std::string> tokens;
    tokens.reserve(seq_len);
    for (std::size_t i = 0; i < seq_len; ++i) {
      input.features.push_back(one_hot(bases[i]));
      tokens.emplace_back(1, kBases[bases[i]]);
    }
    input.token_labels = std::move(tokens);
    out.inputs.push_back(std::move(input));
    out.labels.push_back(std::move(label));
  }
  return out;
}

GlmDataset gen_glm_instances(std::size_t p, std::size_t n,
                             const std::string& weight_law,
                             const std::string& link, std::uint64_t seed) {
  if (p == 0 || n == 0)
    throw std::invalid_argument("gen_glm_instances: p and n must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> weights(p);
  for (std::size_t i = 0; i < p; ++i) {
    double w;
    if (weight_law == "uniform") w = rng.next_symmetric();
    else if (weight_law == "gaussian") w = rng.next_gaussian();
    else throw std::invalid_argument("unknown weight_law: " + weight_law);
    weights[i] = {w};
  }

  GlmDataset out;
  out.model_spec = glm_spec(weights, 0.0, link);
  out.inputs.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    FeatureInput x;
    x.source_id = "glm-" + std::to_string(s);
    x.features.reserve(p);
    for (std::size_t i = 0; i < p; ++i)
      x.features.push_back({rng.next_symmetric()});
    out.inputs.push_back(std::move(x));
  }
  return out;
}

}  // namespace sistk
