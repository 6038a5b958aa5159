#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sistk/evaluator.hpp"
#include "sistk/types.hpp"

namespace sistk {

/// Pseudocount floor applied to motif rows and to rationale one-hots so
/// every KL term stays finite.
constexpr double kPseudocountFloor = 1e-3;

/// A position probability matrix over the DNA bases A, C, G, T. Rows are
/// floored at kPseudocountFloor and renormalized on construction, so all
/// entries are > 0 and each row sums to 1.
struct Motif {
  std::vector<std::array<double, 4>> rows;

  /// Validates that raw rows are probability vectors (sum within 1e-9 of 1)
  /// before flooring.
  static Motif from_probabilities(
      const std::vector<std::array<double, 4>>& raw);

  std::size_t length() const { return rows.size(); }

  /// Highest-probability base letter per row.
  std::string modal_string() const;
};

void to_json(nlohmann::json& j, const Motif& v);
void from_json(const nlohmann::json& j, Motif& v);

/// Floors a distribution at kPseudocountFloor and renormalizes.
std::array<double, 4> floor_distribution(const std::array<double, 4>& row);

/// Distribution for one rationale symbol: floored one-hot for A/C/G/T,
/// uniform for the unknown base N.
std::array<double, 4> base_distribution(char symbol);

/// Pads a rationale (selected positions of a sequence) with N to full_len.
std::string padded_rationale_string(const std::vector<std::size_t>& indices,
                                    const std::vector<std::string>& token_labels,
                                    std::size_t full_len);

/// Divergence between a padded rationale string and a known motif:
/// the motif is slid to the offset that maximizes the likelihood of the
/// rationale's non-N positions (ties to the smallest offset), padded with
/// uniform rows outside its span, and the positionwise KL divergences
/// sum_i KL(R_i || M_i) are added up. Throws if the rationale is longer
/// than full_len.
double motif_divergence(const std::string& rationale_seq, const Motif& motif,
                        std::size_t full_len);

/// Quality of a human-selected subset: f(x_S) - f(x).
double qhs(const Evaluator& model, const FeatureInput& x,
           const std::vector<std::size_t>& human_subset,
           const ImputationBaseline& baseline);

struct MethodSummary {
  std::string method;
  std::size_t count = 0;
  double median_length_pct = 0.0;
  double max_length_pct = 0.0;
  double median_score = 0.0;
  // Median marginal feature importance, split into features inside vs
  // outside the rationale.
  double median_importance_rationale = 0.0;
  double median_importance_other = 0.0;
};

struct PlotRow {
  std::string method;
  std::string input_ref;
  double length_pct = 0.0;
  double score = 0.0;
};

struct RationaleReport {
  std::vector<MethodSummary> methods;
  std::vector<PlotRow> plot;
};

void to_json(nlohmann::json& j, const RationaleReport& v);

/// Summarizes rationales per method: rationale length as % of the input
/// (median/max, computed per example and aggregated by median), achieved
/// score distribution, and the rationale-vs-rest split of marginal feature
/// importance. An empty input list yields an empty report.
RationaleReport rationale_report(
    const std::vector<std::pair<Rationale, const FeatureInput*>>& items,
    const Evaluator& model, const ImputationBaseline& baseline);

/// Plot rows as CSV (length vs score pairs per method).
std::string report_csv(const RationaleReport& report);

}  // namespace sistk
