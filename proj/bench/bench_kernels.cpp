// Compares the OpenMP kernels against their serial reference
// implementations: batch model evaluation and the pairwise distance matrix.
// Results must match bitwise; only the wall time should differ.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "sistk/distances.hpp"
#include "sistk/models.hpp"
#include "sistk/parallel.hpp"
#include "sistk/rng.hpp"

using namespace sistk;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double best_of(int repeats, F&& fn) {
  double best = 1e100;
  for (int r = 0; r < repeats; ++r) {
    const double t0 = now_seconds();
    fn();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

void print_row(const std::string& name, double serial, double parallel,
               bool identical) {
  std::printf("%-28s %10.4f s %10.4f s %8.2fx   %s\n", name.c_str(), serial,
              parallel, serial / parallel, identical ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t batch_size = argc > 1 ? std::stoul(argv[1]) : 4000;
  const std::size_t population = argc > 2 ? std::stoul(argv[2]) : 600;
  Rng rng(1);

  // Batch evaluation: a small MLP over 64-dimensional inputs.
  const std::size_t dim = 64, hidden = 96;
  std::vector<MlpLayer> layers(2);
  layers[0].weights.assign(hidden, std::vector<double>(dim));
  layers[0].bias.assign(hidden, 0.0);
  layers[0].activation = Activation::Tanh;
  for (auto& row : layers[0].weights)
    for (auto& v : row) v = rng.next_gaussian() / 8.0;
  layers[1].weights.assign(1, std::vector<double>(hidden));
  layers[1].bias.assign(1, 0.0);
  layers[1].activation = Activation::Logistic;
  for (auto& v : layers[1].weights[0]) v = rng.next_gaussian() / 10.0;
  const MlpModel mlp(layers);

  std::vector<FeatureInput> batch(batch_size);
  for (std::size_t s = 0; s < batch_size; ++s) {
    batch[s].source_id = std::to_string(s);
    for (std::size_t i = 0; i < dim; ++i)
      batch[s].features.push_back({rng.next_symmetric()});
  }

  std::printf("threads: %d\n", par::max_threads());
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "openmp", "speedup");

  std::vector<double> serial_scores, parallel_scores;
  const double t_eval_serial =
      best_of(3, [&] { serial_scores = mlp.evaluate_serial(batch); });
  const double t_eval_parallel =
      best_of(3, [&] { parallel_scores = mlp.evaluate(batch); });
  print_row("mlp batch (" + std::to_string(batch_size) + ")", t_eval_serial,
            t_eval_parallel, serial_scores == parallel_scores);

  // Pairwise distances over a SIS population.
  std::vector<SisRendering> items(population);
  for (auto& item : items) {
    const std::size_t len = 4 + rng.next_below(10);
    for (std::size_t i = 0; i < len; ++i) {
      item.symbols += "ACGT"[rng.next_below(4)];
      item.coords.push_back({rng.next_symmetric() * 10, rng.next_symmetric() * 10});
    }
  }
  for (const MetricKind metric : {MetricKind::Levenshtein, MetricKind::Energy}) {
    std::vector<double> serial_dist, parallel_dist;
    const double t_serial = best_of(
        3, [&] { serial_dist = pairwise_distances_serial(items, metric); });
    const double t_parallel =
        best_of(3, [&] { parallel_dist = pairwise_distances(items, metric); });
    print_row(std::string("distances/") + to_string(metric) + " (" +
                  std::to_string(population) + ")",
              t_serial, t_parallel, serial_dist == parallel_dist);
  }
  return 0;
}
