#pragma once

#include "gna/pipeline.hpp"

#include "json.hpp"

#include <string>

namespace gna {

// `git describe` of the source tree this library was built from.
std::string build_version();

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MetricsReport& metrics);

// Config, per-seed metrics and loss histories, aggregates and build version.
// Wall-clock fields are only written when include_timing is set, so two
// runs of the same experiment serialize identically without them.
nlohmann::json run_summary_to_json(const RunSummary& summary, bool include_timing = true);
nlohmann::json search_result_to_json(const SearchResult& result);

// "precision  0.72 ± 0.00" style lines, two decimals.
std::string format_summary_table(const RunSummary& summary);

} // namespace gna
