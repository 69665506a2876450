#pragma once

#include "gna/graph_features.hpp"
#include "gna/metrics.hpp"
#include "gna/model.hpp"
#include "gna/series_io.hpp"
#include "gna/visibility_graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gna {

/// Hyperparameters for one training run. Defaults: nhid 128, lr 1e-3,
/// 250 epochs, batch size 32.
struct TrainConfig {
  int nhid = 128;
  double lr = 1e-3;
  int epochs = 250;
  int batch_size = 32;
  std::uint64_t seed = 0;
  bool normalize_series = false;
  bool normalize_features = false;
  double alpha = 1e-2;
  ReadoutMode readout = ReadoutMode::Uniform;
  MessageDirection direction = MessageDirection::Forward;

  // Throws std::invalid_argument on the first violated constraint.
  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

enum class Split { Train, Test };

struct GraphSample {
  VisGraph graph;
  Matrix features;
  int label = -1;
  int series_id = -1;
  Split split = Split::Train;
};

struct Corpus {
  std::string name;
  int num_classes = 0;
  std::vector<GraphSample> train;
  std::vector<GraphSample> test;
};

// One visibility graph and feature matrix per series. Honors
// config.normalize_series (before graph construction) and
// config.normalize_features.
Corpus prepare_corpus(const Dataset& dataset, const TrainConfig& config);

// Builds samples from graphs that were already constructed (e.g. read back
// from a corpus file).
std::vector<GraphSample> samples_from_graphs(std::vector<GraphRecord> records, Split split,
                                             bool normalize_features);

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_history; // mean training loss per epoch
};

// Adam on the mean NLL; the batch order is reshuffled every epoch from the
// config seed. Every sample must be tagged Split::Train. Throws
// DivergenceError on a non-finite loss.
TrainResult train(const TrainConfig& config, std::span<const GraphSample> train_set, int num_classes);

// Predicted class per sample (argmax, lowest index wins ties).
std::vector<int> predict(const ModelParams& params, std::span<const GraphSample> samples);
Matrix predict_log_probs(const ModelParams& params, std::span<const GraphSample> samples);

MetricsReport evaluate(const ModelParams& params, std::span<const GraphSample> samples);

struct SeedRun {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  MetricsReport metrics;
  std::vector<double> loss_history;
  double wall_seconds = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0; // sample standard deviation; 0 for a single run
};

struct RunSummary {
  std::string dataset;
  TrainConfig config;
  std::vector<SeedRun> runs;
  MetricSummary precision, recall, accuracy, f1;
  int failed = 0;
};

// Independent train + evaluate per seed (config.seed is replaced). Failed
// runs are kept in `runs` but excluded from the aggregates.
RunSummary multi_seed_run(const TrainConfig& config, const Corpus& corpus,
                          std::span<const std::uint64_t> seeds);

MetricSummary summarize(std::span<const double> values);

struct SearchGrid {
  std::vector<int> nhid;
  std::vector<double> lr;
  std::vector<int> epochs;
  std::vector<int> batch_size;

  // nhid {8..128}, lr {1e-4..1e-1}, epochs 50..300 step 50, batch {16..256}.
  static SearchGrid standard();
  std::size_t cardinality() const;
  // Mixed-radix decode of a flat index into a config (other fields from base).
  TrainConfig at(std::size_t index, const TrainConfig& base) const;
};

struct SearchTrial {
  TrainConfig config;
  std::vector<double> f1; // one per dataset
  double mean_f1 = 0.0;
  bool ok = true;
};

struct SearchResult {
  TrainConfig best;
  double best_mean_f1 = -1.0;
  std::vector<SearchTrial> trials;
};

// Samples `trials` distinct grid points uniformly, trains each on every
// corpus's train split and scores macro F1 on its test split. The highest
// mean F1 wins (earliest trial on ties). Trials beyond the grid size are
// clamped with a warning.
SearchResult random_search(const SearchGrid& grid, std::span<const Corpus> corpora, int trials,
                           std::uint64_t seed, const TrainConfig& base = {});

} // namespace gna
