#include "cli.hpp"

#include "gna/checkpoint.hpp"
#include "gna/checksum.hpp"
#include "gna/errors.hpp"
#include "gna/graph_features.hpp"
#include "gna/pipeline.hpp"
#include "gna/report.hpp"
#include "gna/series_io.hpp"
#include "gna/visibility_graph.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gna::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> train_paths;
  std::vector<std::string> test_paths;
  std::vector<std::string> dataset_names;
  std::string data_dir;
  std::string out_dir = ".";
  std::string name;
  std::string seeds = "1";
  std::string readout = "uniform";
  std::string direction = "forward";
  std::string checkpoint;
  std::uint64_t seed = 0;
  int index = 0;
  int trials = 10;
  std::uint64_t search_seed = 0;
  bool no_cache = false;
  TrainConfig config;
};

// Holds <out>/.gna.lock for the lifetime of a command.
class OutputLock {
public:
  explicit OutputLock(const fs::path& dir) : path_(dir / ".gna.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw IoError("output directory " + dir.string() + " is locked by another run (" + path_.string() + ")");
    std::fclose(f);
  }
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

private:
  fs::path path_;
};

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError("no such file: " + path.string());
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  // "N" means seeds 0..N-1; anything with a comma is an explicit list.
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos) {
    long long count = 0;
    try {
      count = std::stoll(text);
    } catch (...) {
      throw std::invalid_argument("--seeds: expected a count or a comma-separated list, got '" + text + "'");
    }
    if (count < 1) throw std::invalid_argument("--seeds: count must be >= 1");
    for (long long s = 0; s < count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      seeds.push_back(std::stoull(item));
    } catch (...) {
      throw std::invalid_argument("--seeds: bad seed '" + item + "'");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("--seeds: empty list");
  return seeds;
}

struct DatasetPaths {
  std::string name;
  fs::path train;
  fs::path test;
};

std::string dataset_name_from_path(const fs::path& train) {
  std::string stem = train.stem().string();
  for (const char* suffix : {"_TRAIN", "_train"})
    if (stem.size() > 6 && stem.ends_with(suffix)) return stem.substr(0, stem.size() - 6);
  return stem;
}

std::vector<DatasetPaths> resolve_datasets(const Options& o) {
  std::vector<DatasetPaths> out;
  if (o.train_paths.size() != o.test_paths.size())
    throw std::invalid_argument("every --train needs a matching --test");
  for (std::size_t i = 0; i < o.train_paths.size(); ++i) {
    DatasetPaths d{o.name.empty() || o.train_paths.size() > 1 ? dataset_name_from_path(o.train_paths[i]) : o.name,
                   o.train_paths[i], o.test_paths[i]};
    out.push_back(std::move(d));
  }
  std::string data_dir = o.data_dir;
  if (data_dir.empty()) {
    const char* env = std::getenv("GNA_DATA_DIR");
    data_dir = env ? env : "data";
  }
  for (const auto& name : o.dataset_names) {
    fs::path base = fs::path(data_dir) / name;
    if (!fs::exists(base / (name + "_TRAIN.tsv"))) base = fs::path(data_dir);
    out.push_back({name, base / (name + "_TRAIN.tsv"), base / (name + "_TEST.tsv")});
  }
  if (out.empty()) throw std::invalid_argument("no dataset given (use --train/--test or --dataset)");
  for (const auto& d : out) {
    require_file(d.train);
    require_file(d.test);
  }
  return out;
}

fs::path cache_dir(const fs::path& out_dir) {
  if (const char* env = std::getenv("GNA_CACHE_DIR"); env && *env) return fs::path(env);
  return out_dir / ".gna-cache";
}

void write_corpus_file(const fs::path& path, const std::vector<GraphSample>& samples) {
  std::ostringstream buf;
  for (const auto& s : samples) write_graph(buf, s.graph, s.label);
  write_text(path, buf.str());
}

std::vector<GraphRecord> read_corpus_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_graphs(in, path.string());
}

// Loads a dataset and its graph corpus, reusing cached graphs keyed by the
// source checksums and the normalization flags.
Corpus load_corpus(const DatasetPaths& paths, const TrainConfig& config, const fs::path& out_dir,
                   bool use_cache, std::ostream& err) {
  const Dataset ds = load_dataset(paths.train, paths.test, paths.name);
  if (!use_cache) return prepare_corpus(ds, config);

  const std::string key_text = to_hex(file_checksum(paths.train)) + to_hex(file_checksum(paths.test)) +
                               (config.normalize_series ? "S" : "s") +
                               (config.normalize_features ? "F" : "f");
  const fs::path dir = cache_dir(out_dir);
  const std::string key = paths.name + "-" + to_hex(fnv1a64(key_text));
  const fs::path train_file = dir / (key + "_TRAIN.vg");
  const fs::path test_file = dir / (key + "_TEST.vg");

  if (fs::exists(train_file) && fs::exists(test_file)) {
    Corpus c;
    c.name = ds.name;
    c.num_classes = ds.num_classes;
    c.train = samples_from_graphs(read_corpus_file(train_file), Split::Train, config.normalize_features);
    c.test = samples_from_graphs(read_corpus_file(test_file), Split::Test, config.normalize_features);
    if (c.train.size() == ds.train.size() && c.test.size() == ds.test.size()) return c;
    err << "[gna] warning: stale graph cache for " << paths.name << ", rebuilding\n";
  }
  Corpus c = prepare_corpus(ds, config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) {
    write_corpus_file(train_file, c.train);
    write_corpus_file(test_file, c.test);
  }
  return c;
}

TrainConfig finalize_config(const Options& o) {
  TrainConfig c = o.config;
  c.readout = parse_readout_mode(o.readout);
  c.direction = parse_direction(o.direction);
  c.seed = o.seed;
  c.validate();
  return c;
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--nhid", o.config.nhid, "Hidden width (multiple of 4)")->capture_default_str();
  cmd->add_option("--lr", o.config.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--epochs", o.config.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--batch-size", o.config.batch_size, "Graphs per mini-batch")->capture_default_str();
  cmd->add_option("--alpha", o.config.alpha, "LeakyReLU negative slope")->capture_default_str();
  cmd->add_flag("--normalize-series", o.config.normalize_series, "Z-normalize each series before graph construction");
  cmd->add_flag("--normalize-features", o.config.normalize_features, "Z-normalize node features per graph");
  cmd->add_option("--readout", o.readout, "Readout weights")
      ->check(CLI::IsMember({"uniform", "degree"}))
      ->capture_default_str();
  cmd->add_option("--direction", o.direction, "Message direction")
      ->check(CLI::IsMember({"forward", "reverse", "both"}))
      ->capture_default_str();
  cmd->add_flag("--no-cache", o.no_cache, "Always rebuild graphs");
}

void add_dataset_flags(CLI::App* cmd, Options& o, bool multi) {
  auto* train = cmd->add_option("--train", o.train_paths, "UCR TSV train split");
  auto* test = cmd->add_option("--test", o.test_paths, "UCR TSV test split");
  auto* ds = cmd->add_option("--dataset", o.dataset_names, "Dataset name resolved under --data-dir");
  if (!multi) {
    train->expected(1);
    test->expected(1);
    ds->expected(1);
  }
  cmd->add_option("--data-dir", o.data_dir, "Directory holding <NAME>/<NAME>_TRAIN.tsv (default $GNA_DATA_DIR or ./data)");
  cmd->add_option("--name", o.name, "Dataset name for reports");
}

// ---------------------------------------------------------------------------

int cmd_build_graphs(const Options& o, std::ostream& out) {
  const auto datasets = resolve_datasets(o);
  TrainConfig config = o.config;
  const fs::path dir = prepare_out_dir(o.out_dir);
  OutputLock lock(dir);

  for (const auto& paths : datasets) {
    const Dataset ds = load_dataset(paths.train, paths.test, paths.name);
    const Corpus corpus = prepare_corpus(ds, config);
    const fs::path train_file = dir / (paths.name + "_TRAIN.vg");
    const fs::path test_file = dir / (paths.name + "_TEST.vg");
    write_corpus_file(train_file, corpus.train);
    write_corpus_file(test_file, corpus.test);

    const nlohmann::json manifest = {
        {"format", "gna-corpus-manifest-1"},
        {"dataset", paths.name},
        {"num_classes", ds.num_classes},
        {"train_graphs", corpus.train.size()},
        {"test_graphs", corpus.test.size()},
        {"train_file", train_file.filename().string()},
        {"test_file", test_file.filename().string()},
        {"train_checksum", to_hex(file_checksum(train_file))},
        {"test_checksum", to_hex(file_checksum(test_file))},
        {"source_train_checksum", to_hex(file_checksum(paths.train))},
        {"source_test_checksum", to_hex(file_checksum(paths.test))},
        {"normalize_series", config.normalize_series},
        {"build", build_version()}};
    write_text(dir / (paths.name + "_manifest.json"), manifest.dump(2) + "\n");
    out << paths.name << ": " << corpus.train.size() << " train / " << corpus.test.size()
        << " test graphs -> " << dir.string() << '\n';
  }
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainConfig config = finalize_config(o);
  const auto datasets = resolve_datasets(o);
  const fs::path dir = prepare_out_dir(o.out_dir);
  OutputLock lock(dir);

  const Corpus corpus = load_corpus(datasets.front(), config, dir, !o.no_cache, err);
  const TrainResult result = train(config, corpus.train, corpus.num_classes);
  const MetricsReport train_metrics = evaluate(result.params, corpus.train);

  nlohmann::json ckpt = checkpoint_to_json(result.params);
  ckpt["train_config"] = to_json(config);
  write_text(dir / "checkpoint.json", ckpt.dump(1) + "\n");
  const nlohmann::json log = {{"format", "gna-train-log-1"},
                              {"build", build_version()},
                              {"dataset", corpus.name},
                              {"config", to_json(config)},
                              {"loss_history", result.loss_history},
                              {"train_metrics", to_json(train_metrics)}};
  write_text(dir / "train_log.json", log.dump(2) + "\n");
  out << corpus.name << ": final loss " << result.loss_history.back() << ", train accuracy "
      << train_metrics.accuracy << "\n";
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  require_file(o.checkpoint);
  std::ifstream in(o.checkpoint);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(o.checkpoint + ": " + e.what());
  }
  const ModelParams params = checkpoint_from_json(doc);
  TrainConfig config = o.config;
  if (doc.contains("train_config")) {
    const TrainConfig saved = train_config_from_json(doc["train_config"]);
    config.normalize_series = config.normalize_series || saved.normalize_series;
    config.normalize_features = config.normalize_features || saved.normalize_features;
  }

  const auto datasets = resolve_datasets(o);
  const fs::path dir = prepare_out_dir(o.out_dir);
  OutputLock lock(dir);
  const Corpus corpus = load_corpus(datasets.front(), config, dir, !o.no_cache, err);
  if (corpus.num_classes != params.num_classes)
    throw std::invalid_argument("checkpoint has " + std::to_string(params.num_classes) +
                                " classes but the dataset has " + std::to_string(corpus.num_classes));
  const MetricsReport m = evaluate(params, corpus.test);
  const nlohmann::json report = {{"format", "gna-eval-report-1"},
                                 {"build", build_version()},
                                 {"dataset", corpus.name},
                                 {"checkpoint", o.checkpoint},
                                 {"metrics", to_json(m)}};
  write_text(dir / "evaluation.json", report.dump(2) + "\n");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: precision %.2f recall %.2f accuracy %.2f f1 %.2f\n",
                corpus.name.c_str(), m.precision, m.recall, m.accuracy, m.f1);
  out << buf;
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainConfig config = finalize_config(o);
  const auto seeds = parse_seeds(o.seeds);
  const auto datasets = resolve_datasets(o);
  const fs::path dir = prepare_out_dir(o.out_dir);
  OutputLock lock(dir);

  for (const auto& paths : datasets) {
    const Corpus corpus = load_corpus(paths, config, dir, !o.no_cache, err);
    const RunSummary summary = multi_seed_run(config, corpus, seeds);
    const fs::path report = dir / (datasets.size() > 1 ? paths.name + "_report.json" : "report.json");
    write_text(report, run_summary_to_json(summary).dump(2) + "\n");
    out << format_summary_table(summary);
    if (summary.failed == static_cast<int>(summary.runs.size()))
      throw std::runtime_error("every run failed for " + paths.name);
  }
  return kExitOk;
}

int cmd_search(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainConfig base = finalize_config(o);
  const auto datasets = resolve_datasets(o);
  const fs::path dir = prepare_out_dir(o.out_dir);
  OutputLock lock(dir);

  std::vector<Corpus> corpora;
  for (const auto& paths : datasets) corpora.push_back(load_corpus(paths, base, dir, !o.no_cache, err));
  const SearchResult result = random_search(SearchGrid::standard(), corpora, o.trials, o.search_seed, base);
  write_text(dir / "search_log.json", search_result_to_json(result).dump(2) + "\n");
  const auto& b = result.best;
  out << "best mean f1 " << result.best_mean_f1 << ": nhid " << b.nhid << ", lr " << b.lr << ", epochs "
      << b.epochs << ", batch size " << b.batch_size << '\n';
  return kExitOk;
}

int cmd_degree_dist(const Options& o, std::ostream& out) {
  if (o.train_paths.size() != 1) throw std::invalid_argument("degree-dist needs exactly one --train file");
  require_file(o.train_paths.front());
  const auto series = parse_ucr_tsv(fs::path(o.train_paths.front()));
  if (o.index < 0 || o.index >= static_cast<int>(series.size()))
    throw std::out_of_range("--index " + std::to_string(o.index) + " out of range (file has " +
                            std::to_string(series.size()) + " series)");
  const fs::path dir = prepare_out_dir(o.out_dir);
  OutputLock lock(dir);

  const auto& values = series[o.index].values;
  const VisGraph g = build_nvg_dc(o.config.normalize_series ? znormalize(values) : values, o.index);
  const auto hist = degree_distribution(g);

  std::ostringstream csv;
  csv.precision(17);
  csv << "degree,count,log10_degree,log10_count\n";
  for (const auto& [deg, count] : hist)
    csv << deg << ',' << count << ',' << std::log10(static_cast<double>(deg)) << ','
        << std::log10(static_cast<double>(count)) << '\n';
  write_text(dir / "degree_distribution.csv", csv.str());

  std::ostringstream edges;
  edges << "source,target\n";
  for (const auto& [i, j] : g.edges()) edges << i << ',' << j << '\n';
  write_text(dir / "edges.csv", edges.str());

  std::ostringstream features;
  write_feature_csv(features, node_feature_matrix(g, o.config.normalize_features));
  write_text(dir / "features.csv", features.str());

  std::vector<int> degrees;
  for (int u = 0; u < g.num_nodes(); ++u) degrees.push_back(g.in_degree(u) + g.out_degree(u));
  std::sort(degrees.begin(), degrees.end());
  out << "series " << o.index << ": " << g.num_nodes() << " nodes, " << g.num_edges() << " edges, "
      << hist.size() << " distinct degrees, max degree " << degrees.back() << ", median degree "
      << degrees[degrees.size() / 2] << '\n';
  return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time series classification with visibility graphs and GraphSAGE", "gna"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build-graphs", "Build and cache visibility-graph corpora");
  add_dataset_flags(build, o, true);
  build->add_option("--out", o.out_dir, "Output directory")->required();
  build->add_flag("--normalize-series", o.config.normalize_series, "Z-normalize each series first");

  auto* train_cmd = app.add_subcommand("train", "Train one model and write a checkpoint");
  add_dataset_flags(train_cmd, o, false);
  add_model_flags(train_cmd, o);
  train_cmd->add_option("--out", o.out_dir, "Output directory")->required();
  train_cmd->add_option("--seed", o.seed, "Seed for initialization and shuffling")->capture_default_str();

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a checkpoint on the test split");
  add_dataset_flags(eval_cmd, o, false);
  eval_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint.json from `train`")->required();
  eval_cmd->add_option("--out", o.out_dir, "Output directory")->required();
  eval_cmd->add_flag("--normalize-series", o.config.normalize_series, "Z-normalize each series first");
  eval_cmd->add_flag("--normalize-features", o.config.normalize_features, "Z-normalize node features");
  eval_cmd->add_flag("--no-cache", o.no_cache, "Always rebuild graphs");

  auto* run_cmd = app.add_subcommand("run", "Multi-seed train + evaluate with aggregated metrics");
  add_dataset_flags(run_cmd, o, true);
  add_model_flags(run_cmd, o);
  run_cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--seeds", o.seeds, "Seed count N (seeds 0..N-1) or comma-separated list")
      ->capture_default_str();

  auto* search_cmd = app.add_subcommand("search", "Random hyperparameter search over the standard grid");
  add_dataset_flags(search_cmd, o, true);
  add_model_flags(search_cmd, o);
  search_cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  search_cmd->add_option("--trials", o.trials, "Grid points to try")->capture_default_str();
  search_cmd->add_option("--search-seed", o.search_seed, "Seed for trial sampling")->capture_default_str();

  auto* deg_cmd = app.add_subcommand("degree-dist", "Degree histogram, edge list and features of one series");
  deg_cmd->add_option("--train", o.train_paths, "UCR TSV file holding the series")->required()->expected(1);
  deg_cmd->add_option("--index", o.index, "Row index of the series in the file")->capture_default_str();
  deg_cmd->add_option("--out", o.out_dir, "Output directory")->required();
  deg_cmd->add_flag("--normalize-series", o.config.normalize_series, "Z-normalize the series first");
  deg_cmd->add_flag("--normalize-features", o.config.normalize_features, "Z-normalize node features");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gna: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*build) return cmd_build_graphs(o, out);
    if (*train_cmd) return cmd_train(o, out, err);
    if (*eval_cmd) return cmd_evaluate(o, out, err);
    if (*run_cmd) return cmd_run(o, out, err);
    if (*search_cmd) return cmd_search(o, out, err);
    if (*deg_cmd) return cmd_degree_dist(o, out);
  } catch (const IoError& e) {
    err << "gna: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "gna: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "gna: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "gna: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gna: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

} // namespace gna::cli
