// Copyright 2026 The qkinfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkinfer/calibration.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkinfer/errors.hpp"

#include "calibration_defaults.inc"

namespace qkinfer {

using nlohmann::json;

Calibration parse_calibration(const std::string& json_text) {
  Calibration c;
  try {
    const json doc = json::parse(json_text);
    c.format_version = doc.at("format_version").get<int>();
    if (c.format_version != 1) {
      throw FormatError("unsupported calibration format_version " +
                        std::to_string(c.format_version));
    }
    const json& mult = doc.at("multipliers");
    for (StrategyId id : kAllStrategies) {
      const double m = mult.at(std::string(strategy_name(id))).get<double>();
      if (!(m > 0.0) || !std::isfinite(m)) {
        throw FormatError("calibration multiplier for " + std::string(strategy_name(id)) +
                          " must be positive");
      }
      c.multipliers[static_cast<std::size_t>(id)] = m;
    }
    c.qae_shots_per_round = doc.at("qae_shots_per_round").get<std::uint64_t>();
    c.qae_min_ratio = doc.at("qae_min_ratio").get<double>();
    c.c_qae = doc.at("c_qae").get<double>();
    c.sample_average_inner_shots = doc.at("sample_average_inner_shots").get<std::uint64_t>();
    c.sample_average_qae_inner_shots =
        doc.at("sample_average_qae_inner_shots").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("calibration: ") + e.what());
  }
  if (c.qae_shots_per_round == 0 || !(c.qae_min_ratio > 1.0) || c.sample_average_inner_shots == 0 ||
      c.sample_average_qae_inner_shots == 0) {
    throw FormatError("calibration: shot counts must be positive and qae_min_ratio > 1");
  }
  return c;
}

Calibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open calibration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_calibration(buf.str());
}

std::string to_json(const Calibration& calibration) {
  json doc;
  doc["format_version"] = calibration.format_version;
  for (StrategyId id : kAllStrategies) {
    doc["multipliers"][std::string(strategy_name(id))] = calibration.multiplier(id);
  }
  doc["qae_shots_per_round"] = calibration.qae_shots_per_round;
  doc["qae_min_ratio"] = calibration.qae_min_ratio;
  doc["c_qae"] = calibration.c_qae;
  doc["sample_average_inner_shots"] = calibration.sample_average_inner_shots;
  doc["sample_average_qae_inner_shots"] = calibration.sample_average_qae_inner_shots;
  return doc.dump(2);
}

const Calibration& default_calibration() {
  static const Calibration embedded = parse_calibration(kEmbeddedCalibration);
  return embedded;
}

}  // namespace qkinfer
