// sistk: extract sufficient input subsets from black-box scoring functions,
// compare them against alternative rationale methods, cluster them, and
// evaluate them against ground-truth patterns.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sistk/baselines.hpp"
#include "sistk/clustering.hpp"
#include "sistk/datagen.hpp"
#include "sistk/evaluation.hpp"
#include "sistk/io.hpp"
#include "sistk/log.hpp"
#include "sistk/masking.hpp"
#include "sistk/models.hpp"
#include "sistk/parallel.hpp"
#include "sistk/sis_core.hpp"
#include "sistk/stats.hpp"

namespace {

using namespace sistk;

bool g_quiet = false;

void progress(const std::string& msg) {
  if (!g_quiet) std::cout << msg << '\n';
}

struct DirectedModel {
  std::shared_ptr<Evaluator> raw;
  std::unique_ptr<NegatedEvaluator> negated;
  double tau = 0.0;

  const Evaluator& model() const { return negated ? *negated : *raw; }
};

ThresholdDirection parse_direction(const std::string& s) {
  if (s == "above") return ThresholdDirection::Above;
  if (s == "below") return ThresholdDirection::Below;
  throw CLI::ValidationError("--direction", "must be above or below");
}

DirectedModel load_directed_model(const std::string& model_path, double tau,
                                  const std::string& direction,
                                  const FeatureInput* exemplar) {
  DirectedModel dm;
  dm.raw = load_evaluator(load_json(model_path));
  if (exemplar) {
    if (const auto* builtin = dynamic_cast<const BuiltinModel*>(dm.raw.get()))
      builtin->validate_schema(*exemplar);
  }
  DecisionThreshold t;
  t.tau = tau;
  t.direction = parse_direction(direction);
  dm.tau = effective_tau(t);
  if (t.direction == ThresholdDirection::Below)
    dm.negated = std::make_unique<NegatedEvaluator>(*dm.raw);
  return dm;
}

ImputationBaseline load_baseline(const std::string& path) {
  return load_json(path).get<ImputationBaseline>();
}

std::map<std::string, const FeatureInput*> index_by_source(
    const std::vector<FeatureInput>& inputs) {
  std::map<std::string, const FeatureInput*> index;
  for (const auto& x : inputs) index[x.source_id] = &x;
  return index;
}

// "tag=path" arguments for multi-file inputs.
std::pair<std::string, std::string> split_tagged(const std::string& arg) {
  const std::size_t eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size())
    throw CLI::ValidationError("--in", "expected tag=path, got: " + arg);
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::vector<SisCollectionResult> load_sis_results(const std::string& path) {
  const nlohmann::json j = load_json(path);
  std::vector<SisCollectionResult> out;
  for (const auto& r : j.at("results")) out.push_back(r.get<SisCollectionResult>());
  return out;
}

Motif load_motif(const std::string& path) {
  return load_json(path).get<Motif>();
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::string kind;
  std::size_t n = 100;
  std::size_t seq_len = 30;
  double plant_rate = 0.5;
  std::uint64_t seed = 1;
  std::string motif_file;
  std::string modal_seq;
  double modal_prob = 0.97;
  double scale = 4.0;
  double bias = -10.3;
  std::size_t p = 10;
  std::string weight_law = "uniform";
  std::string link = "logistic";
  std::string out_data, out_labels, out_model, out_motif;
};

void run_gen(const GenArgs& a) {
  if (a.kind == "motif") {
    Motif motif = [&] {
      if (!a.motif_file.empty()) return load_motif(a.motif_file);
      if (a.modal_seq.empty())
        throw CLI::ValidationError("gen", "need --motif or --modal-seq");
      std::vector<std::array<double, 4>> rows;
      const double rest = (1.0 - a.modal_prob) / 3.0;
      for (char c : a.modal_seq) {
        const std::size_t b = std::string("ACGT").find(c);
        if (b == std::string::npos)
          throw CLI::ValidationError("--modal-seq", "bases must be ACGT");
        std::array<double, 4> row = {rest, rest, rest, rest};
        row[b] = a.modal_prob;
        rows.push_back(row);
      }
      return Motif::from_probabilities(rows);
    }();
    const PlantedMotifDataset data =
        gen_planted_motif(a.n, a.seq_len, motif, a.plant_rate, a.seed);
    if (!a.out_data.empty()) save_dataset(a.out_data, data.inputs);
    if (!a.out_labels.empty()) {
      std::vector<nlohmann::json> lines;
      for (const auto& label : data.labels) lines.push_back(label);
      save_jsonl(a.out_labels, lines);
    }
    if (!a.out_model.empty()) {
      std::vector<std::vector<double>> matrix;
      for (const auto& row : motif.rows)
        matrix.push_back({row[0], row[1], row[2], row[3]});
      save_json(a.out_model, pwm_spec(matrix, a.scale, a.bias));
    }
    if (!a.out_motif.empty()) save_json(a.out_motif, nlohmann::json(motif));
    progress("generated " + std::to_string(a.n) + " sequences of length " +
             std::to_string(a.seq_len));
    return;
  }
  if (a.kind == "glm") {
    const GlmDataset data =
        gen_glm_instances(a.p, a.n, a.weight_law, a.link, a.seed);
    if (!a.out_data.empty()) save_dataset(a.out_data, data.inputs);
    if (!a.out_model.empty()) save_json(a.out_model, data.model_spec);
    progress("generated " + std::to_string(a.n) + " glm instances with p = " +
             std::to_string(a.p));
    return;
  }
  throw CLI::ValidationError("--kind", "must be motif or glm");
}

// --------------------------------------------------------------- mask ----

void run_mask(const std::string& data_path, const std::string& out,
              bool zero, const std::string& schema_id) {
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const ImputationBaseline baseline =
      zero ? zero_baseline_like(data.front(), schema_id)
           : compute_mean_baseline(data, schema_id);
  save_json(out, nlohmann::json(baseline));
  progress("baseline over " + std::to_string(data.size()) + " inputs -> " + out);
}

// ------------------------------------------------------------- extract ----

void run_extract(const std::string& model_path, const std::string& data_path,
                 const std::string& baseline_path, double tau,
                 const std::string& direction, const std::string& out) {
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const DirectedModel dm =
      load_directed_model(model_path, tau, direction, &data.front());
  const ImputationBaseline baseline = load_baseline(baseline_path);

  nlohmann::json results = nlohmann::json::array();
  std::size_t skipped = 0;
  const std::vector<double> base_scores = dm.model().evaluate(data);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (base_scores[i] < dm.tau) {
      ++skipped;
      log_debug("skipping " + data[i].source_id + ": decision criterion not met");
      continue;
    }
    results.push_back(sis_collection(dm.model(), data[i], dm.tau, baseline));
  }
  save_json(out, nlohmann::json{{"index_base", 0}, {"results", results}});
  progress("extracted SIS for " + std::to_string(results.size()) +
           " inputs (" + std::to_string(skipped) + " below threshold) -> " + out);
}

// ------------------------------------------------------------ baseline ----

struct BaselineArgs {
  std::string method, model, data, baseline, attrib, k_from, out;
  std::string k_source = "median";
  double tau = 0.0;
  std::string direction = "above";
};

void run_baseline(const BaselineArgs& a) {
  const std::vector<FeatureInput> data = load_dataset(a.data);
  const DirectedModel dm =
      load_directed_model(a.model, a.tau, a.direction, &data.front());
  const ImputationBaseline baseline = load_baseline(a.baseline);

  const bool needs_attrib = a.method == "suff_attrib" ||
                            a.method == "attrib_len" || a.method == "top_attrib";
  const bool needs_k = a.method == "perturb_len" || a.method == "attrib_len";

  std::map<std::string, AttributionScores> attrib;
  if (needs_attrib) {
    if (a.attrib.empty())
      throw CLI::ValidationError("--attrib", "required for " + a.method);
    for (const auto& j : load_jsonl(a.attrib)) {
      auto scores = j.get<AttributionScores>();
      attrib[scores.input_ref] = std::move(scores);
    }
  }
  std::map<std::string, std::size_t> k_by_input;
  if (needs_k) {
    if (a.k_from.empty())
      throw CLI::ValidationError("--k-from", "required for " + a.method);
    const LengthSource source = a.k_source == "first" ? LengthSource::FirstSis
                                                      : LengthSource::MedianSis;
    for (const auto& r : load_sis_results(a.k_from))
      k_by_input[r.input_ref] = length_from_sis(r, source);
  }

  nlohmann::json rationales = nlohmann::json::array();
  const std::vector<double> base_scores = dm.model().evaluate(data);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const FeatureInput& x = data[i];
    if (base_scores[i] < dm.tau) {
      ++skipped;
      continue;
    }
    std::optional<Rationale> r;
    if (a.method == "suff_perturb") {
      r = assemble_sufficiency(dm.model(), x, dm.tau,
                               perturbation_ordering(dm.model(), x, baseline),
                               baseline, RationaleMethod::SuffPerturb);
    } else if (a.method == "perturb_len") {
      const auto it = k_by_input.find(x.source_id);
      if (it == k_by_input.end() || it->second == 0) continue;
      r = assemble_length_constrained(
          dm.model(), x, dm.tau, perturbation_ordering(dm.model(), x, baseline),
          std::min(it->second, x.size()), baseline, RationaleMethod::PerturbLen);
    } else if (a.method == "suff_attrib" || a.method == "attrib_len" ||
               a.method == "top_attrib") {
      const auto it = attrib.find(x.source_id);
      if (it == attrib.end()) continue;
      if (a.method == "suff_attrib") {
        r = assemble_sufficiency(dm.model(), x, dm.tau,
                                 attribution_ordering(it->second), baseline,
                                 RationaleMethod::SuffAttrib);
      } else if (a.method == "attrib_len") {
        const auto kit = k_by_input.find(x.source_id);
        if (kit == k_by_input.end() || kit->second == 0) continue;
        r = assemble_length_constrained(
            dm.model(), x, dm.tau, attribution_ordering(it->second),
            std::min(kit->second, x.size()), baseline,
            RationaleMethod::AttribLen);
      } else {
        const ImputationBaseline zeros = zero_baseline_like(x, "zero");
        const double zero_ref =
            dm.model().evaluate({materialize(x, {}, zeros)}).front();
        r = assemble_attribution_budget(dm.model(), x, dm.tau, it->second,
                                        zero_ref, baseline);
      }
    } else {
      throw CLI::ValidationError("--method", "unknown method " + a.method);
    }
    nlohmann::json jr = *r;
    jr["input_ref"] = x.source_id;
    rationales.push_back(std::move(jr));
  }
  save_json(a.out, nlohmann::json{{"index_base", 0},
                                  {"method", a.method},
                                  {"rationales", rationales}});
  progress(a.method + " rationales for " + std::to_string(rationales.size()) +
           " inputs (" + std::to_string(skipped) + " below threshold) -> " +
           a.out);
}

// ------------------------------------------------------------- cluster ----

void run_cluster(const std::vector<std::string>& tagged_inputs,
                 const std::string& data_path, const std::string& metric_name,
                 double eps, std::size_t min_pts, std::size_t grid_width,
                 const std::string& out) {
  const MetricKind metric = metric_from_string(metric_name);
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const auto by_source = index_by_source(data);

  std::vector<SisPopulationItem> items;
  nlohmann::json item_meta = nlohmann::json::array();
  for (const auto& arg : tagged_inputs) {
    const auto [tag, path] = split_tagged(arg);
    for (const auto& result : load_sis_results(path)) {
      const auto it = by_source.find(result.input_ref);
      if (it == by_source.end())
        throw std::runtime_error("cluster: input " + result.input_ref +
                                 " from " + path + " not in dataset");
      for (const auto& sis : result.sis_list) {
        SisPopulationItem item;
        item.source_model_tag = tag;
        item.rendering = render_sis(sis, *it->second, metric, grid_width);
        item.display = rendering_display(item.rendering, metric);
        items.push_back(std::move(item));
        item_meta.push_back({{"source", tag}, {"input_ref", result.input_ref}});
      }
    }
  }
  const ClusterReport report = cluster_population(items, metric, eps, min_pts);
  nlohmann::json j = report;
  j["items"] = std::move(item_meta);
  save_json(out, j);
  progress("clustered " + std::to_string(items.size()) + " SIS into " +
           std::to_string(report.clusters.size()) + " clusters -> " + out);
}

// ------------------------------------------------------------ evaluate ----

struct RationaleRecord {
  Rationale rationale;
  std::string input_ref;
};

std::vector<RationaleRecord> load_rationales_any(const std::string& path) {
  const nlohmann::json j = load_json(path);
  std::vector<RationaleRecord> out;
  if (j.contains("rationales")) {
    for (const auto& jr : j.at("rationales")) {
      RationaleRecord rec;
      rec.rationale = jr.get<Rationale>();
      rec.input_ref = jr.at("input_ref").get<std::string>();
      out.push_back(std::move(rec));
    }
    return out;
  }
  if (j.contains("results")) {
    for (const auto& jr : j.at("results")) {
      const auto result = jr.get<SisCollectionResult>();
      for (const auto& sis : result.sis_list) {
        RationaleRecord rec;
        rec.rationale.method_tag = RationaleMethod::Sis;
        rec.rationale.indices = sis.indices;
        rec.rationale.achieved_score = sis.achieved_score;
        rec.rationale.sufficiency_met = true;
        rec.input_ref = result.input_ref;
        out.push_back(std::move(rec));
      }
    }
    return out;
  }
  throw std::runtime_error(path + " holds neither rationales nor results");
}

void run_evaluate_motif(const std::string& motif_path,
                        const std::string& rationales_path,
                        const std::string& data_path, std::size_t full_len,
                        const std::string& out) {
  const Motif motif = load_motif(motif_path);
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const auto by_source = index_by_source(data);

  nlohmann::json per = nlohmann::json::array();
  std::map<std::string, std::vector<double>> by_method;
  for (const auto& rec : load_rationales_any(rationales_path)) {
    const auto it = by_source.find(rec.input_ref);
    if (it == by_source.end())
      throw std::runtime_error("evaluate: input " + rec.input_ref +
                               " not in dataset");
    const FeatureInput& x = *it->second;
    if (!x.token_labels)
      throw std::runtime_error("evaluate: dataset lacks token labels");
    const std::size_t len = full_len > 0 ? full_len : x.size();
    const double div = motif_divergence(
        padded_rationale_string(rec.rationale.indices, *x.token_labels, len),
        motif, len);
    const std::string method = to_string(rec.rationale.method_tag);
    by_method[method].push_back(div);
    per.push_back({{"input_ref", rec.input_ref},
                   {"method", method},
                   {"divergence", div},
                   {"length", rec.rationale.indices.size()}});
  }
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [method, divs] : by_method)
    summary[method] = {{"count", divs.size()}, {"median_divergence", median(divs)}};
  save_json(out, nlohmann::json{{"per_rationale", per}, {"summary", summary}});
  progress("motif divergence for " + std::to_string(per.size()) +
           " rationales -> " + out);
}

void run_evaluate_human(const std::string& human_path,
                        const std::string& model_path,
                        const std::string& baseline_path,
                        const std::string& data_path, double tau,
                        const std::string& direction, const std::string& out) {
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const DirectedModel dm =
      load_directed_model(model_path, tau, direction, &data.front());
  const ImputationBaseline baseline = load_baseline(baseline_path);
  const auto by_source = index_by_source(data);

  nlohmann::json per = nlohmann::json::array();
  std::vector<double> values;
  for (const auto& j : load_jsonl(human_path)) {
    const std::string ref = j.at("input_ref").get<std::string>();
    const auto subset = j.at("indices").get<std::vector<std::size_t>>();
    const auto it = by_source.find(ref);
    if (it == by_source.end())
      throw std::runtime_error("evaluate: input " + ref + " not in dataset");
    if (dm.model().evaluate({*it->second}).front() < dm.tau) continue;
    const double q = qhs(dm.model(), *it->second, subset, baseline);
    values.push_back(q);
    per.push_back({{"input_ref", ref}, {"qhs", q}});
  }
  nlohmann::json summary = nlohmann::json::object();
  if (!values.empty()) {
    summary["count"] = values.size();
    summary["median_qhs"] = median(values);
  }
  save_json(out, nlohmann::json{{"per_input", per}, {"summary", summary}});
  progress("qhs for " + std::to_string(per.size()) + " inputs -> " + out);
}

// -------------------------------------------------------------- report ----

void run_report(const std::vector<std::string>& inputs,
                const std::string& model_path, const std::string& data_path,
                const std::string& baseline_path, const std::string& out,
                const std::string& csv_path) {
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const auto model = load_evaluator(load_json(model_path));
  const ImputationBaseline baseline = load_baseline(baseline_path);
  const auto by_source = index_by_source(data);

  std::vector<std::pair<Rationale, const FeatureInput*>> items;
  for (const auto& path : inputs) {
    for (const auto& rec : load_rationales_any(path)) {
      const auto it = by_source.find(rec.input_ref);
      if (it == by_source.end())
        throw std::runtime_error("report: input " + rec.input_ref +
                                 " not in dataset");
      items.emplace_back(rec.rationale, it->second);
    }
  }
  const RationaleReport report = rationale_report(items, *model, baseline);
  save_json(out, nlohmann::json(report));
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write file: " + csv_path);
    csv << report_csv(report);
  }
  progress("report over " + std::to_string(items.size()) + " rationales -> " +
           out);
}

// -------------------------------------------------- compare-imputation ----

void run_compare_imputation(const std::string& model_path,
                            const std::string& data_path,
                            const std::string& baseline_path,
                            std::size_t n_samples, std::uint64_t seed,
                            const std::string& out) {
  const std::vector<FeatureInput> data = load_dataset(data_path);
  const auto model = load_evaluator(load_json(model_path));
  const ImputationBaseline baseline = load_baseline(baseline_path);
  const ImputationComparisonReport report =
      compare_imputation(*model, data, baseline, n_samples, seed);
  save_json(out, nlohmann::json(report));
  progress("imputation comparison over " + std::to_string(n_samples) +
           " draws -> " + out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sufficient input subset toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "max worker threads (default: all cores)");
  app.add_flag("--quiet", g_quiet, "suppress progress output");

  GenArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate synthetic datasets");
  cmd_gen->add_option("--kind", gen.kind, "motif|glm")->required();
  cmd_gen->add_option("--n", gen.n, "number of examples");
  cmd_gen->add_option("--seq-len", gen.seq_len, "sequence length (motif)");
  cmd_gen->add_option("--plant-rate", gen.plant_rate, "plant probability");
  cmd_gen->add_option("--seed", gen.seed, "rng seed");
  cmd_gen->add_option("--motif", gen.motif_file, "motif JSON file");
  cmd_gen->add_option("--modal-seq", gen.modal_seq, "modal base string");
  cmd_gen->add_option("--modal-prob", gen.modal_prob, "modal base probability");
  cmd_gen->add_option("--scale", gen.scale, "pwm model logistic scale");
  cmd_gen->add_option("--bias", gen.bias, "pwm model log-likelihood bias");
  cmd_gen->add_option("--p", gen.p, "feature count (glm)");
  cmd_gen->add_option("--weight-law", gen.weight_law, "uniform|gaussian");
  cmd_gen->add_option("--link", gen.link, "identity|logistic");
  cmd_gen->add_option("--out-data", gen.out_data, "dataset JSONL");
  cmd_gen->add_option("--out-labels", gen.out_labels, "labels JSONL");
  cmd_gen->add_option("--out-model", gen.out_model, "model spec JSON");
  cmd_gen->add_option("--out-motif", gen.out_motif, "motif JSON");

  std::string mask_data, mask_out, mask_schema = "mean";
  bool mask_zero = false;
  CLI::App* cmd_mask = app.add_subcommand("mask", "compute an imputation baseline");
  cmd_mask->add_option("--data", mask_data, "dataset JSONL")->required();
  cmd_mask->add_option("--out", mask_out, "baseline JSON")->required();
  cmd_mask->add_flag("--zero", mask_zero, "all-zeros baseline instead of means");
  cmd_mask->add_option("--schema-id", mask_schema, "baseline schema id");

  std::string ex_model, ex_data, ex_baseline, ex_out, ex_direction = "above";
  double ex_tau = 0.0;
  CLI::App* cmd_extract = app.add_subcommand("extract", "extract SIS collections");
  cmd_extract->add_option("--model", ex_model, "model spec JSON")->required();
  cmd_extract->add_option("--data", ex_data, "dataset JSONL")->required();
  cmd_extract->add_option("--baseline", ex_baseline, "baseline JSON")->required();
  cmd_extract->add_option("--tau", ex_tau, "decision threshold")->required();
  cmd_extract->add_option("--direction", ex_direction, "above|below");
  cmd_extract->add_option("--out", ex_out, "output JSON")->required();

  BaselineArgs bl;
  CLI::App* cmd_baseline =
      app.add_subcommand("baseline", "alternative rationale methods");
  cmd_baseline->add_option("--method", bl.method,
                           "suff_perturb|perturb_len|suff_attrib|attrib_len|top_attrib")
      ->required();
  cmd_baseline->add_option("--model", bl.model, "model spec JSON")->required();
  cmd_baseline->add_option("--data", bl.data, "dataset JSONL")->required();
  cmd_baseline->add_option("--baseline", bl.baseline, "baseline JSON")->required();
  cmd_baseline->add_option("--tau", bl.tau, "decision threshold")->required();
  cmd_baseline->add_option("--direction", bl.direction, "above|below");
  cmd_baseline->add_option("--attrib", bl.attrib, "attribution scores JSONL");
  cmd_baseline->add_option("--k-from", bl.k_from, "SIS result file fixing k");
  cmd_baseline->add_option("--k-source", bl.k_source, "median|first");
  cmd_baseline->add_option("--out", bl.out, "output JSON")->required();

  std::vector<std::string> cl_inputs;
  std::string cl_data, cl_metric, cl_out;
  double cl_eps = 0.0;
  std::size_t cl_min_pts = 0, cl_grid = 0;
  CLI::App* cmd_cluster = app.add_subcommand("cluster", "cluster SIS populations");
  cmd_cluster->add_option("--in", cl_inputs, "tag=sis_result.json (repeatable)")
      ->required();
  cmd_cluster->add_option("--data", cl_data, "dataset JSONL")->required();
  cmd_cluster->add_option("--metric", cl_metric, "levenshtein|jaccard|energy")
      ->required();
  cmd_cluster->add_option("--eps", cl_eps, "dbscan eps")->required();
  cmd_cluster->add_option("--min-pts", cl_min_pts, "dbscan min_pts")->required();
  cmd_cluster->add_option("--grid-width", cl_grid,
                          "image width for energy coordinates (0 = sequence)");
  cmd_cluster->add_option("--out", cl_out, "cluster report JSON")->required();

  std::string ev_motif, ev_human, ev_rationales, ev_data, ev_model,
      ev_baseline, ev_out, ev_direction = "above";
  std::size_t ev_full_len = 0;
  double ev_tau = 0.0;
  CLI::App* cmd_eval = app.add_subcommand("evaluate", "score rationales");
  cmd_eval->add_option("--motif", ev_motif, "ground-truth motif JSON");
  cmd_eval->add_option("--human", ev_human, "human index sets JSONL");
  cmd_eval->add_option("--rationales", ev_rationales,
                       "rationale or SIS result JSON");
  cmd_eval->add_option("--data", ev_data, "dataset JSONL")->required();
  cmd_eval->add_option("--model", ev_model, "model spec JSON (human mode)");
  cmd_eval->add_option("--baseline", ev_baseline, "baseline JSON (human mode)");
  cmd_eval->add_option("--tau", ev_tau, "decision threshold (human mode)");
  cmd_eval->add_option("--direction", ev_direction, "above|below");
  cmd_eval->add_option("--full-len", ev_full_len,
                       "padded rationale length (default: input length)");
  cmd_eval->add_option("--out", ev_out, "output JSON")->required();

  std::vector<std::string> rp_inputs;
  std::string rp_model, rp_data, rp_baseline, rp_out, rp_csv;
  CLI::App* cmd_report =
      app.add_subcommand("report", "merge methods into one comparison table");
  cmd_report->add_option("--in", rp_inputs, "rationale or SIS files (repeatable)")
      ->required();
  cmd_report->add_option("--model", rp_model, "model spec JSON")->required();
  cmd_report->add_option("--data", rp_data, "dataset JSONL")->required();
  cmd_report->add_option("--baseline", rp_baseline, "baseline JSON")->required();
  cmd_report->add_option("--out", rp_out, "report JSON")->required();
  cmd_report->add_option("--csv", rp_csv, "plot-data CSV");

  std::string ci_model, ci_data, ci_baseline, ci_out;
  std::size_t ci_samples = 1000;
  std::uint64_t ci_seed = 1;
  CLI::App* cmd_ci = app.add_subcommand("compare-imputation",
                                        "mean vs hot-deck masking deltas");
  cmd_ci->add_option("--model", ci_model, "model spec JSON")->required();
  cmd_ci->add_option("--data", ci_data, "dataset JSONL")->required();
  cmd_ci->add_option("--baseline", ci_baseline, "baseline JSON")->required();
  cmd_ci->add_option("--n-samples", ci_samples, "number of draws");
  cmd_ci->add_option("--seed", ci_seed, "rng seed");
  cmd_ci->add_option("--out", ci_out, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // usage text, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    par::set_max_threads(threads);
    if (cmd_gen->parsed()) run_gen(gen);
    else if (cmd_mask->parsed()) run_mask(mask_data, mask_out, mask_zero, mask_schema);
    else if (cmd_extract->parsed())
      run_extract(ex_model, ex_data, ex_baseline, ex_tau, ex_direction, ex_out);
    else if (cmd_baseline->parsed()) run_baseline(bl);
    else if (cmd_cluster->parsed())
      run_cluster(cl_inputs, cl_data, cl_metric, cl_eps, cl_min_pts, cl_grid,
                  cl_out);
    else if (cmd_eval->parsed()) {
      if (!ev_motif.empty()) {
        if (ev_rationales.empty())
          throw CLI::ValidationError("--rationales", "required with --motif");
        run_evaluate_motif(ev_motif, ev_rationales, ev_data, ev_full_len, ev_out);
      } else if (!ev_human.empty()) {
        if (ev_model.empty() || ev_baseline.empty())
          throw CLI::ValidationError("evaluate",
                                     "--human mode needs --model and --baseline");
        run_evaluate_human(ev_human, ev_model, ev_baseline, ev_data, ev_tau,
                           ev_direction, ev_out);
      } else {
        throw CLI::ValidationError("evaluate", "need --motif or --human");
      }
    } else if (cmd_report->parsed())
      run_report(rp_inputs, rp_model, rp_data, rp_baseline, rp_out, rp_csv);
    else if (cmd_ci->parsed())
      run_compare_imputation(ci_model, ci_data, ci_baseline, ci_samples,
                             ci_seed, ci_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
