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

#include "qkinfer/cli/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qkinfer/errors.hpp"

namespace qkinfer::cli {

using nlohmann::json;

bool operator==(const DatasetFile& a, const DatasetFile& b) {
  auto same_points = [](const std::vector<DataPoint>& p, const std::vector<DataPoint>& q) {
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].coordinates != q[i].coordinates) return false;
    }
    return true;
  };
  if (a.name != b.name || a.alpha != b.alpha || a.training.size() != b.training.size()) {
    return false;
  }
  const auto& fa = a.feature_map;
  const auto& fb = b.feature_map;
  if (fa.family != fb.family || fa.num_qubits != fb.num_qubits ||
      fa.num_layers != fb.num_layers || fa.offsets != fb.offsets) {
    return false;
  }
  for (std::size_t i = 0; i < a.training.size(); ++i) {
    if (a.training[i].label != b.training[i].label ||
        a.training[i].x.coordinates != b.training[i].x.coordinates) {
      return false;
    }
  }
  return same_points(a.test_inputs, b.test_inputs);
}

void DatasetFile::validate() const {
  try {
    feature_map.validate();
    if (training.empty()) throw FormatError("training_set is empty");
    const TrainingSet set(training);
    for (const auto& p : training) check_point(feature_map, p.x);
    if (alpha.size() != training.size()) {
      throw FormatError("alpha has " + std::to_string(alpha.size()) + " entries for " +
                        std::to_string(training.size()) + " training points");
    }
    const CoefficientVector coef(alpha);
    for (const auto& x : test_inputs) {
      check_point(feature_map, x);
      if (x.dimension() != set.dimension()) {
        throw FormatError("test input dimension differs from the training set");
      }
    }
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Instance DatasetFile::instance(const DataPoint& x) const {
  validate();
  return Instance{feature_map, CoefficientVector(alpha), TrainingSet(training), x};
}

Instance DatasetFile::instance() const {
  if (test_inputs.empty()) throw FormatError("dataset has no test_inputs; pass --x");
  return instance(test_inputs.front());
}

DatasetFile parse_dataset(const std::string& json_text) {
  DatasetFile d;
  try {
    const json doc = json::parse(json_text);
    const int version = doc.at("format_version").get<int>();
    if (version != kDatasetFormatVersion) {
      throw FormatError("unsupported dataset format_version " + std::to_string(version));
    }
    d.name = doc.value("name", std::string{});
    const json& fm = doc.at("feature_map");
    const auto family = parse_family(fm.at("family").get<std::string>());
    if (!family) throw FormatError("unknown feature map family " + fm.at("family").dump());
    d.feature_map.family = *family;
    d.feature_map.num_qubits = fm.at("num_qubits").get<std::size_t>();
    d.feature_map.num_layers = fm.at("num_layers").get<std::size_t>();
    d.feature_map.offsets = fm.value("offsets", std::vector<double>{});
    for (const json& p : doc.at("training_set")) {
      d.training.push_back({DataPoint{p.at("x").get<std::vector<double>>()},
                            p.at("y").get<double>()});
    }
    d.alpha = doc.at("alpha").get<std::vector<double>>();
    if (doc.contains("test_inputs")) {
      for (const json& x : doc.at("test_inputs")) {
        d.test_inputs.push_back(DataPoint{x.get<std::vector<double>>()});
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("dataset: ") + e.what());
  }
  d.validate();
  return d;
}

DatasetFile load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string dump_dataset(const DatasetFile& d) {
  json doc;
  doc["format_version"] = kDatasetFormatVersion;
  doc["name"] = d.name;
  doc["feature_map"] = {{"family", std::string(family_name(d.feature_map.family))},
                        {"num_qubits", d.feature_map.num_qubits},
                        {"num_layers", d.feature_map.num_layers},
                        {"offsets", d.feature_map.offsets}};
  doc["training_set"] = json::array();
  for (const auto& p : d.training) {
    doc["training_set"].push_back({{"x", p.x.coordinates}, {"y", p.label}});
  }
  doc["alpha"] = d.alpha;
  doc["test_inputs"] = json::array();
  for (const auto& x : d.test_inputs) doc["test_inputs"].push_back(x.coordinates);
  return doc.dump(2) + "\n";
}

void save_dataset(const DatasetFile& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << dump_dataset(dataset);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

DatasetFile generate_dataset(const GeneratorOptions& o) {
  DatasetFile d;
  d.name = o.name;
  d.feature_map.family = o.family;
  d.feature_map.num_qubits = o.num_qubits;
  d.feature_map.num_layers = o.num_layers;
  const std::size_t dim =
      o.family == FeatureFamily::kIdentity ? std::max<std::size_t>(1, o.num_qubits) : o.num_qubits;

  SeededStream rng(SeededStream::derive({o.seed, 0x6461746173657400ULL}));
  auto point = [&] {
    DataPoint p;
    for (std::size_t j = 0; j < dim; ++j) p.coordinates.push_back(std::numbers::pi * rng.uniform());
    return p;
  };
  for (std::size_t i = 0; i < o.num_terms; ++i) {
    DataPoint p = point();
    d.training.push_back({std::move(p), rng.uniform() < 0.5 ? -1.0 : 1.0});
  }
  for (std::size_t i = 0; i < o.num_terms; ++i) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    double magnitude;
    if (o.heavy_tailed) {
      // Pareto(shape 1.5, scale 0.1), capped to keep norms desk-sized.
      magnitude = std::min(2.0, 0.1 * std::pow(1.0 - rng.uniform(), -1.0 / 1.5));
    } else {
      magnitude = rng.uniform();
    }
    d.alpha.push_back(sign * magnitude);
  }
  for (std::size_t i = 0; i < o.num_test_inputs; ++i) d.test_inputs.push_back(point());
  d.validate();
  return d;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw FormatError("not a number: '" + cell + "'");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size() || !std::isfinite(v)) {
      throw FormatError("not a finite number: '" + cell + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw FormatError("empty number list");
  return out;
}

}  // namespace qkinfer::cli
