// Copyright 2026 The confsom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "confsom/som.hpp"

#include <json.hpp>

namespace confsom {

namespace {
constexpr int kMapFormatVersion = 1;
}

std::string map_to_json(const SomMap& map) {
  const auto& cfg = map.config();
  nlohmann::json doc;
  doc["format"] = "confsom-map";
  doc["format_version"] = kMapFormatVersion;
  doc["grid"] = {{"rows", map.grid().rows()}, {"cols", map.grid().cols()}};
  doc["dim"] = map.dim();
  doc["trained"] = map.trained();
  doc["config"] = {{"map_size", cfg.map_size},
                   {"radius0", cfg.radius0},
                   {"radius_final", cfg.radius_final},
                   {"train_len", cfg.train_len},
                   {"mode", to_string(cfg.mode)},
                   {"alpha0", cfg.alpha0},
                   {"init", to_string(cfg.init)},
                   {"neighbor_fn", "gaussian"},
                   {"seed", cfg.seed}};
  auto& rows = doc["prototypes"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < map.prototypes().rows(); ++i) {
    const auto row = map.prototype(static_cast<std::size_t>(i));
    rows.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  return doc.dump(1) + "\n";
}

SomMap map_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != "confsom-map") throw ParseError("not a confsom map document");
    if (doc.at("format_version").get<int>() != kMapFormatVersion) {
      throw ParseError("unsupported map format version " + doc.at("format_version").dump());
    }
    const HexGrid grid(doc.at("grid").at("rows").get<std::size_t>(), doc.at("grid").at("cols").get<std::size_t>());
    const auto dim = doc.at("dim").get<std::size_t>();

    const auto& c = doc.at("config");
    TrainingConfig cfg;
    cfg.map_size = c.at("map_size").get<std::size_t>();
    cfg.radius0 = c.at("radius0").get<double>();
    cfg.radius_final = c.at("radius_final").get<double>();
    cfg.train_len = c.at("train_len").get<std::size_t>();
    cfg.mode = parse_training_mode(c.at("mode").get<std::string>());
    cfg.alpha0 = c.at("alpha0").get<double>();
    cfg.init = parse_init_method(c.at("init").get<std::string>());
    cfg.seed = c.at("seed").get<std::uint64_t>();

    const auto& rows = doc.at("prototypes");
    if (rows.size() != grid.size()) throw ParseError("prototype count differs from grid size");
    CoordMatrix proto(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != dim) throw ParseError("prototype " + std::to_string(i) + " has wrong dimension");
      for (std::size_t k = 0; k < dim; ++k) {
        proto(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
      }
    }
    return SomMap(grid, std::move(proto), cfg, doc.at("trained").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid map document: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("invalid map document: ") + e.what());
  }
}

}  // namespace confsom
