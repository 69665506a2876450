#include "gna/pipeline.hpp"

#include "gna/adam.hpp"
#include "gna/errors.hpp"
#include "gna/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gna {

void TrainConfig::validate() const {
  if (nhid <= 0 || nhid % 4 != 0)
    throw std::invalid_argument("nhid must be a positive multiple of 4, got " + std::to_string(nhid));
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
}

namespace {

std::vector<GraphSample> build_split(const std::vector<TimeSeries>& series, Split split,
                                     const TrainConfig& config) {
  std::vector<std::vector<double>> values;
  values.reserve(series.size());
  for (const auto& ts : series)
    values.push_back(config.normalize_series ? znormalize(ts.values) : ts.values);

  std::vector<VisGraph> graphs = kernels::build_graphs(values);
  std::vector<GraphRecord> records;
  records.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) records.push_back({std::move(graphs[i]), series[i].label});
  return samples_from_graphs(std::move(records), split, config.normalize_features);
}

} // namespace

std::vector<GraphSample> samples_from_graphs(std::vector<GraphRecord> records, Split split,
                                             bool normalize_features) {
  std::vector<GraphSample> samples(records.size());
  const long count = static_cast<long>(records.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    GraphSample& s = samples[i];
    s.features = node_feature_matrix(records[i].graph, normalize_features);
    s.series_id = records[i].graph.series_id();
    s.graph = std::move(records[i].graph);
    s.label = records[i].label;
    s.split = split;
  }
  return samples;
}

Corpus prepare_corpus(const Dataset& dataset, const TrainConfig& config) {
  if (dataset.train.empty() || dataset.test.empty())
    throw std::invalid_argument("prepare_corpus: dataset '" + dataset.name + "' has an empty split");
  Corpus corpus;
  corpus.name = dataset.name;
  corpus.num_classes = dataset.num_classes;
  corpus.train = build_split(dataset.train, Split::Train, config);
  corpus.test = build_split(dataset.test, Split::Test, config);
  return corpus;
}

namespace {

struct PackedBatch {
  BatchedGraph graph;
  Matrix features;
  std::vector<int> labels;
};

PackedBatch pack(std::span<const GraphSample> samples, std::span<const std::size_t> order,
                 const ModelParams& params) {
  std::vector<const VisGraph*> graphs;
  std::vector<const Matrix*> features;
  PackedBatch b;
  for (std::size_t idx : order) {
    graphs.push_back(&samples[idx].graph);
    features.push_back(&samples[idx].features);
    b.labels.push_back(samples[idx].label);
  }
  b.graph = batch_graphs(graphs, params.direction, params.readout);
  b.features = stack_rows(features);
  return b;
}

constexpr std::size_t kEvalBatch = 256;

} // namespace

TrainResult train(const TrainConfig& config, std::span<const GraphSample> train_set, int num_classes) {
  config.validate();
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  for (const auto& s : train_set) {
    if (s.split != Split::Train) throw std::logic_error("train: received a sample not tagged as training data");
    if (s.label < 0 || s.label >= num_classes) throw std::out_of_range("train: label out of range");
  }

  TrainResult result;
  result.params = init_params(config.nhid, num_classes, config.seed, config.alpha);
  result.params.readout = config.readout;
  result.params.direction = config.direction;

  AdamState state = make_adam_state(result.params.tensors());
  const AdamOptions adam{.lr = config.lr};
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      const PackedBatch b = pack(train_set, std::span(order).subspan(start, len), result.params);
      const auto lg = loss_and_gradients(result.params, b.features, b.graph, b.labels);
      if (!std::isfinite(lg.loss))
        throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1) + ", step " +
                              std::to_string(steps + 1) + " (loss " + std::to_string(lg.loss) + ")");
      adam_step(result.params, lg.gradients, state, adam);
      loss_sum += lg.loss;
      ++steps;
    }
    result.loss_history.push_back(loss_sum / static_cast<double>(steps));
  }
  return result;
}

Matrix predict_log_probs(const ModelParams& params, std::span<const GraphSample> samples) {
  Matrix out(samples.size(), params.num_classes);
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < samples.size(); start += kEvalBatch) {
    const std::size_t len = std::min(kEvalBatch, samples.size() - start);
    idx.resize(len);
    std::iota(idx.begin(), idx.end(), start);
    const PackedBatch b = pack(samples, idx, params);
    const Matrix lp = predict_log_probs(params, b.features, b.graph);
    std::copy(lp.data(), lp.data() + lp.size(), out.data() + start * out.cols());
  }
  return out;
}

std::vector<int> predict(const ModelParams& params, std::span<const GraphSample> samples) {
  const Matrix lp = predict_log_probs(params, samples);
  std::vector<int> pred(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) pred[i] = argmax(lp.row(i));
  return pred;
}

MetricsReport evaluate(const ModelParams& params, std::span<const GraphSample> samples) {
  if (samples.empty()) throw std::invalid_argument("evaluate: empty split");
  std::vector<int> truth;
  truth.reserve(samples.size());
  for (const auto& s : samples) truth.push_back(s.label);
  return compute_metrics(truth, predict(params, samples), params.num_classes);
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

RunSummary multi_seed_run(const TrainConfig& config, const Corpus& corpus,
                          std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw std::invalid_argument("multi_seed_run: no seeds given");
  config.validate();

  RunSummary summary;
  summary.dataset = corpus.name;
  summary.config = config;
  std::vector<double> precision, recall, accuracy, f1;
  for (std::uint64_t seed : seeds) {
    SeedRun run;
    run.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      TrainConfig c = config;
      c.seed = seed;
      TrainResult tr = train(c, corpus.train, corpus.num_classes);
      run.loss_history = std::move(tr.loss_history);
      run.metrics = evaluate(tr.params, corpus.test);
      run.ok = true;
    } catch (const DivergenceError& e) {
      run.error = e.what();
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (run.ok) {
      precision.push_back(run.metrics.precision);
      recall.push_back(run.metrics.recall);
      accuracy.push_back(run.metrics.accuracy);
      f1.push_back(run.metrics.f1);
    } else {
      ++summary.failed;
      std::clog << "[gna] warning: seed " << seed << " failed and is excluded from aggregates: "
                << run.error << '\n';
    }
    summary.runs.push_back(std::move(run));
  }
  summary.precision = summarize(precision);
  summary.recall = summarize(recall);
  summary.accuracy = summarize(accuracy);
  summary.f1 = summarize(f1);
  return summary;
}

SearchGrid SearchGrid::standard() {
  SearchGrid g;
  g.nhid = {8, 16, 32, 64, 128};
  g.lr = {1e-4, 1e-3, 1e-2, 1e-1};
  for (int e = 50; e < 301; e += 50) g.epochs.push_back(e);
  g.batch_size = {16, 32, 64, 128, 256};
  return g;
}

std::size_t SearchGrid::cardinality() const {
  return nhid.size() * lr.size() * epochs.size() * batch_size.size();
}

TrainConfig SearchGrid::at(std::size_t index, const TrainConfig& base) const {
  if (index >= cardinality()) throw std::out_of_range("grid index out of range");
  TrainConfig c = base;
  c.batch_size = batch_size[index % batch_size.size()];
  index /= batch_size.size();
  c.epochs = epochs[index % epochs.size()];
  index /= epochs.size();
  c.lr = lr[index % lr.size()];
  index /= lr.size();
  c.nhid = nhid[index];
  return c;
}

SearchResult random_search(const SearchGrid& grid, std::span<const Corpus> corpora, int trials,
                           std::uint64_t seed, const TrainConfig& base) {
  if (trials < 1) throw std::invalid_argument("random_search: trials must be >= 1");
  if (corpora.empty()) throw std::invalid_argument("random_search: no datasets");
  const std::size_t space = grid.cardinality();
  if (space == 0) throw std::invalid_argument("random_search: empty grid");
  std::size_t count = static_cast<std::size_t>(trials);
  if (count > space) {
    std::clog << "[gna] warning: " << trials << " trials requested but the grid has only " << space
              << " points; clamping\n";
    count = space;
  }

  std::vector<std::size_t> points(space);
  std::iota(points.begin(), points.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(points.begin(), points.end(), rng);

  SearchResult result;
  for (std::size_t t = 0; t < count; ++t) {
    SearchTrial trial;
    trial.config = grid.at(points[t], base);
    for (const Corpus& corpus : corpora) {
      try {
        const TrainResult tr = train(trial.config, corpus.train, corpus.num_classes);
        trial.f1.push_back(evaluate(tr.params, corpus.test).f1);
      } catch (const DivergenceError& e) {
        std::clog << "[gna] warning: search trial " << t << " diverged on " << corpus.name << ": "
                  << e.what() << '\n';
        trial.ok = false;
        trial.f1.push_back(0.0);
      }
    }
    trial.mean_f1 = std::accumulate(trial.f1.begin(), trial.f1.end(), 0.0) /
                    static_cast<double>(trial.f1.size());
    if (trial.mean_f1 > result.best_mean_f1) {
      result.best_mean_f1 = trial.mean_f1;
      result.best = trial.config;
    }
    result.trials.push_back(std::move(trial));
  }
  return result;
}

} // namespace gna
