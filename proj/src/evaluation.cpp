#include "sistk/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sistk/baselines.hpp"
#include "sistk/stats.hpp"

namespace sistk {

namespace {

constexpr const char* kBases = "ACGT";

int base_index(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

constexpr std::array<double, 4> kUniform = {0.25, 0.25, 0.25, 0.25};

double kl_divergence(const std::array<double, 4>& from,
                     const std::array<double, 4>& to) {
  double d = 0.0;
  for (std::size_t j = 0; j < 4; ++j)
    if (from[j] > 0.0) d += from[j] * std::log(from[j] / to[j]);
  return d;
}

}  // namespace

std::array<double, 4> floor_distribution(const std::array<double, 4>& row) {
  std::array<double, 4> out;
  double sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    out[j] = std::max(row[j], kPseudocountFloor);
    sum += out[j];
  }
  for (double& v : out) v /= sum;
  return out;
}

Motif Motif::from_probabilities(const std::vector<std::array<double, 4>>& raw) {
  if (raw.empty()) throw std::invalid_argument("motif: no rows");
  Motif m;
  m.rows.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double sum = 0.0;
    for (double v : raw[i]) {
      if (v < 0.0)
        throw std::invalid_argument("motif: negative probability in row " +
                                    std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("motif: row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum));
    m.rows.push_back(floor_distribution(raw[i]));
  }
  return m;
}

std::string Motif::modal_string() const {
  std::string s;
  for (const auto& row : rows) {
    const std::size_t j =
        static_cast<std::size_t>(std::max_element(row.begin(), row.end()) -
                                 row.begin());
    s += kBases[j];
  }
  return s;
}

void to_json(nlohmann::json& j, const Motif& v) {
  j = nlohmann::json{{"matrix", v.rows}};
}

void from_json(const nlohmann::json& j, Motif& v) {
  v = Motif::from_probabilities(
      j.at("matrix").get<std::vector<std::array<double, 4>>>());
}

std::array<double, 4> base_distribution(char symbol) {
  if (symbol == 'N') return kUniform;
  const int b = base_index(symbol);
  if (b < 0)
    throw std::invalid_argument(std::string("unknown base symbol: ") + symbol);
  std::array<double, 4> onehot = {0.0, 0.0, 0.0, 0.0};
  onehot[static_cast<std::size_t>(b)] = 1.0;
  return floor_distribution(onehot);
}

std::string padded_rationale_string(const std::vector<std::size_t>& indices,
                                    const std::vector<std::string>& token_labels,
                                    std::size_t full_len) {
  std::string s(full_len, 'N');
  for (std::size_t idx : indices) {
    if (idx >= full_len)
      throw std::invalid_argument("rationale index " + std::to_string(idx) +
                                  " beyond sequence length " +
                                  std::to_string(full_len));
    if (idx >= token_labels.size() || token_labels[idx].size() != 1)
      throw std::invalid_argument("token label at " + std::to_string(idx) +
                                  " is not a single base letter");
    s[idx] = token_labels[idx][0];
  }
  return s;
}

double motif_divergence(const std::string& rationale_seq, const Motif& motif,
                        std::size_t full_len) {
  if (rationale_seq.size() > full_len)
    throw std::invalid_argument("rationale of length " +
                                std::to_string(rationale_seq.size()) +
                                " longer than full_len " +
                                std::to_string(full_len));
  if (motif.length() > full_len)
    throw std::invalid_argument("motif longer than full_len");
  std::string seq = rationale_seq;
  seq.resize(full_len, 'N');

  // Best offset under the log-likelihood of the known (non-N) positions;
  // positions outside the motif span score as the uniform background.
  const std::size_t n = motif.length();
  std::size_t best_off = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t off = 0; off + n <= full_len; ++off) {
    double ll = 0.0;
    for (std::size_t i = 0; i < full_len; ++i) {
      if (seq[i] == 'N') continue;
      const int b = base_index(seq[i]);
      if (b < 0)
        throw std::invalid_argument(std::string("unknown base symbol: ") +
                                    seq[i]);
      const double q = (i >= off && i < off + n)
                           ? motif.rows[i - off][static_cast<std::size_t>(b)]
                           : 0.25;
      ll += std::log(q);
    }
    if (ll > best_ll) {
      best_ll = ll;
      best_off = off;
    }
  }

  double div = 0.0;
  for (std::size_t i = 0; i < full_len; ++i) {
    const std::array<double, 4> r = base_distribution(seq[i]);
    const std::array<double, 4>& m =
        (i >= best_off && i < best_off + n) ? motif.rows[i - best_off]
                                            : kUniform;
    div += kl_divergence(r, m);
  }
  return div;
}

double qhs(const Evaluator& model, const FeatureInput& x,
           const std::vector<std::size_t>& human_subset,
           const ImputationBaseline& baseline) {
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const std::vector<double> scores = evaluate_respecting_capability(
      model, {materialize(x, human_subset, baseline), materialize(x, all, baseline)});
  return scores[0] - scores[1];
}

RationaleReport rationale_report(
    const std::vector<std::pair<Rationale, const FeatureInput*>>& items,
    const Evaluator& model, const ImputationBaseline& baseline) {
  RationaleReport report;
  if (items.empty()) return report;

  // Marginal importances per distinct input, computed once.
  std::map<const FeatureInput*, std::vector<double>> importance_cache;
  for (const auto& [rat, input] : items) {
    (void)rat;
    if (!importance_cache.count(input))
      importance_cache[input] = perturbation_importance(model, *input, baseline);
  }

  std::map<std::string, std::vector<std::size_t>> by_method;
  for (std::size_t i = 0; i < items.size(); ++i)
    by_method[to_string(items[i].first.method_tag)].push_back(i);

  for (const auto& [method, idxs] : by_method) {
    MethodSummary s;
    s.method = method;
    s.count = idxs.size();
    std::vector<double> lengths, scores, imp_in, imp_out;
    for (std::size_t i : idxs) {
      const Rationale& r = items[i].first;
      const FeatureInput& x = *items[i].second;
      const double pct = 100.0 * static_cast<double>(r.indices.size()) /
                         static_cast<double>(x.size());
      lengths.push_back(pct);
      scores.push_back(r.achieved_score);
      report.plot.push_back({method, x.source_id, pct, r.achieved_score});
      const std::vector<double>& imp = importance_cache[items[i].second];
      std::vector<bool> in(x.size(), false);
      for (std::size_t idx : r.indices) in[idx] = true;
      for (std::size_t f = 0; f < x.size(); ++f)
        (in[f] ? imp_in : imp_out).push_back(imp[f]);
    }
    s.median_length_pct = median(lengths);
    s.max_length_pct = *std::max_element(lengths.begin(), lengths.end());
    s.median_score = median(scores);
    if (!imp_in.empty()) s.median_importance_rationale = median(imp_in);
    if (!imp_out.empty()) s.median_importance_other = median(imp_out);
    report.methods.push_back(std::move(s));
  }
  return report;
}

void to_json(nlohmann::json& j, const RationaleReport& v) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : v.methods)
    methods.push_back({{"method", m.method},
                       {"count", m.count},
                       {"median_length_pct", m.median_length_pct},
                       {"max_length_pct", m.max_length_pct},
                       {"median_score", m.median_score},
                       {"median_importance_rationale",
                        m.median_importance_rationale},
                       {"median_importance_other", m.median_importance_other}});
  nlohmann::json plot = nlohmann::json::array();
  for (const auto& row : v.plot)
    plot.push_back({{"method", row.method},
                    {"input_ref", row.input_ref},
                    {"length_pct", row.length_pct},
                    {"score", row.score}});
  j = nlohmann::json{{"methods", methods}, {"plot", plot}};
}

std::string report_csv(const RationaleReport& report) {
  std::string csv = "method,input_ref,length_pct,score\n";
  for (const auto& row : report.plot) {
    char buf[64];
    csv += row.method;
    csv += ',';
    csv += row.input_ref;
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", row.length_pct, row.score);
    csv += buf;
  }
  return csv;
}

}  // namespace sistk
