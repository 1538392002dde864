#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gslrec/generative/model.hpp"

namespace gslrec::generative {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline nlohmann::json dense_to_json(const DenseLayer& layer) {
  nlohmann::json j;
  j["rows"] = layer.weights.rows();
  j["cols"] = layer.weights.cols();
  std::vector<double> w(layer.weights.data(),
                        layer.weights.data() + layer.weights.rows() * layer.weights.cols());
  j["weights"] = w;
  j["bias"] = layer.bias;
  j["activation"] = activation_name(layer.activation);
  return j;
}

inline DenseLayer dense_from_json(const nlohmann::json& j) {
  DenseLayer layer;
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const auto w = j.at("weights").get<std::vector<double>>();
  if (w.size() != rows * cols) throw std::invalid_argument("model record: weight size mismatch");
  layer.weights = Matrix(rows, cols);
  std::copy(w.begin(), w.end(), layer.weights.data());
  layer.bias = j.at("bias").get<Vector>();
  layer.activation = activation_from_name(j.at("activation").get<std::string>());
  return layer;
}

}  // namespace detail

inline nlohmann::json model_to_json(const GenerativeMap& map) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = model_kind_name(map.kind);
  j["latent_dim"] = map.latent_dim;
  j["ambient_dim"] = map.ambient_dim;
  j["build_seed"] = map.build_seed;
  j["build_stream"] = map.build_stream;
  for (const auto& layer : map.dense_layers) j["dense_layers"].push_back(detail::dense_to_json(layer));
  for (const auto& layer : map.coupling_layers) {
    nlohmann::json cj;
    cj["mask"] = std::vector<int>(layer.mask.begin(), layer.mask.end());
    for (const auto& d : layer.scale_net) cj["scale_net"].push_back(detail::dense_to_json(d));
    for (const auto& d : layer.shift_net) cj["shift_net"].push_back(detail::dense_to_json(d));
    j["coupling_layers"].push_back(cj);
  }
  return j;
}

inline GenerativeMap model_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kModelFormatVersion)
    throw std::invalid_argument("model record: unsupported format version");
  GenerativeMap map;
  map.kind = model_kind_from_name(j.at("kind").get<std::string>());
  map.latent_dim = j.at("latent_dim").get<std::size_t>();
  map.ambient_dim = j.at("ambient_dim").get<std::size_t>();
  map.build_seed = j.at("build_seed").get<std::uint64_t>();
  map.build_stream = j.at("build_stream").get<std::uint64_t>();
  if (j.contains("dense_layers"))
    for (const auto& dj : j.at("dense_layers")) map.dense_layers.push_back(detail::dense_from_json(dj));
  if (j.contains("coupling_layers"))
    for (const auto& cj : j.at("coupling_layers")) {
      CouplingLayer layer;
      const auto mask = cj.at("mask").get<std::vector<int>>();
      layer.mask.assign(mask.begin(), mask.end());
      for (const auto& dj : cj.at("scale_net")) layer.scale_net.push_back(detail::dense_from_json(dj));
      for (const auto& dj : cj.at("shift_net")) layer.shift_net.push_back(detail::dense_from_json(dj));
      map.coupling_layers.push_back(std::move(layer));
    }
  return map;
}

inline void save_model(const GenerativeMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out << model_to_json(map).dump(2) << '\n';
}

inline GenerativeMap load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace gslrec::generative
