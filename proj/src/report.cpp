#include "gna/report.hpp"

#include <cstdio>
#include <sstream>

#ifndef GNA_BUILD_VERSION
#define GNA_BUILD_VERSION "unknown"
#endif

namespace gna {

std::string build_version() { return GNA_BUILD_VERSION; }

nlohmann::json to_json(const TrainConfig& c) {
  return {{"nhid", c.nhid},
          {"lr", c.lr},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"normalize_series", c.normalize_series},
          {"normalize_features", c.normalize_features},
          {"alpha", c.alpha},
          {"readout", std::string(to_string(c.readout))},
          {"direction", std::string(to_string(c.direction))}};
}

TrainConfig train_config_from_json(const nlohmann::json& doc) {
  TrainConfig c;
  c.nhid = doc.value("nhid", c.nhid);
  c.lr = doc.value("lr", c.lr);
  c.epochs = doc.value("epochs", c.epochs);
  c.batch_size = doc.value("batch_size", c.batch_size);
  c.seed = doc.value("seed", c.seed);
  c.normalize_series = doc.value("normalize_series", c.normalize_series);
  c.normalize_features = doc.value("normalize_features", c.normalize_features);
  c.alpha = doc.value("alpha", c.alpha);
  c.readout = parse_readout_mode(doc.value("readout", std::string("uniform")));
  c.direction = parse_direction(doc.value("direction", std::string("forward")));
  c.validate();
  return c;
}

nlohmann::json to_json(const MetricsReport& m) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& s : m.per_class)
    per_class.push_back({{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}});
  return {{"precision", m.precision}, {"recall", m.recall},     {"accuracy", m.accuracy},
          {"f1", m.f1},               {"confusion", m.confusion}, {"per_class", per_class}};
}

namespace {

nlohmann::json to_json(const MetricSummary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

} // namespace

nlohmann::json run_summary_to_json(const RunSummary& summary, bool include_timing) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : summary.runs) {
    nlohmann::json j = {{"seed", r.seed}, {"ok", r.ok}, {"loss_history", r.loss_history}};
    if (r.ok)
      j["metrics"] = to_json(r.metrics);
    else
      j["error"] = r.error;
    if (include_timing) j["wall_seconds"] = r.wall_seconds;
    runs.push_back(std::move(j));
  }
  return {{"format", "gna-run-report-1"},
          {"build", build_version()},
          {"dataset", summary.dataset},
          {"config", to_json(summary.config)},
          {"seeds", summary.runs.size()},
          {"failed", summary.failed},
          {"runs", runs},
          {"aggregate",
           {{"precision", to_json(summary.precision)},
            {"recall", to_json(summary.recall)},
            {"accuracy", to_json(summary.accuracy)},
            {"f1", to_json(summary.f1)}}}};
}

nlohmann::json search_result_to_json(const SearchResult& result) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : result.trials)
    trials.push_back({{"config", to_json(t.config)}, {"f1", t.f1}, {"mean_f1", t.mean_f1}, {"ok", t.ok}});
  return {{"format", "gna-search-log-1"},
          {"build", build_version()},
          {"best", to_json(result.best)},
          {"best_mean_f1", result.best_mean_f1},
          {"trials", trials}};
}

std::string format_summary_table(const RunSummary& summary) {
  std::ostringstream out;
  const int ok = static_cast<int>(summary.runs.size()) - summary.failed;
  out << summary.dataset << " (" << ok << '/' << summary.runs.size() << " runs)\n";
  auto line = [&out](const char* name, const MetricSummary& s) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-10s %.2f ± %.2f\n", name, s.mean, s.std);
    out << buf;
  };
  line("precision", summary.precision);
  line("recall", summary.recall);
  line("accuracy", summary.accuracy);
  line("f1-score", summary.f1);
  return out.str();
}

} // namespace gna
