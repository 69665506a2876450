#include "gna/checkpoint.hpp"

#include "gna/errors.hpp"

#include <fstream>

namespace gna {

nlohmann::json checkpoint_to_json(const ModelParams& params) {
  nlohmann::json doc;
  doc["format"] = "gna-checkpoint-1";
  doc["nhid"] = params.nhid;
  doc["num_classes"] = params.num_classes;
  doc["alpha"] = params.alpha;
  doc["seed"] = params.seed;
  doc["readout"] = std::string(to_string(params.readout));
  doc["direction"] = std::string(to_string(params.direction));
  auto& tensors = doc["tensors"] = nlohmann::json::object();
  params.for_each_tensor([&](const std::string& name, const Matrix& m) {
    tensors[name] = {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.values()}};
  });
  return doc;
}

ModelParams checkpoint_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "gna-checkpoint-1")
      throw std::invalid_argument("unsupported checkpoint format '" + doc.at("format").get<std::string>() + "'");
    ModelParams p = init_params(doc.at("nhid").get<int>(), doc.at("num_classes").get<int>(),
                                doc.at("seed").get<std::uint64_t>(), doc.at("alpha").get<double>());
    p.readout = parse_readout_mode(doc.at("readout").get<std::string>());
    p.direction = parse_direction(doc.at("direction").get<std::string>());
    const auto& tensors = doc.at("tensors");
    p.for_each_tensor([&](const std::string& name, Matrix& m) {
      const auto& t = tensors.at(name);
      if (t.at("rows").get<std::size_t>() != m.rows() || t.at("cols").get<std::size_t>() != m.cols())
        throw std::invalid_argument("checkpoint tensor " + name + " has the wrong shape");
      auto data = t.at("data").get<std::vector<double>>();
      if (data.size() != m.size())
        throw std::invalid_argument("checkpoint tensor " + name + " has the wrong length");
      m.values() = std::move(data);
    });
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << checkpoint_to_json(params).dump(1) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return checkpoint_from_json(doc);
}

} // namespace gna
