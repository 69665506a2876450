#pragma once

#include "gna/model.hpp"

#include <filesystem>
#include "json.hpp"

namespace gna {

// JSON document: architecture settings plus every tensor as
// {"rows", "cols", "data": [row-major values]}.
nlohmann::json checkpoint_to_json(const ModelParams& params);
ModelParams checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

} // namespace gna
