// Copyright 2026 The fusebeam Authors.
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

#include "fusebeam/metrics/parameter_set.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fusebeam/error.h"

namespace fusebeam {

std::size_t Tensor::NumElements() const {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

nlohmann::json ParameterSetToJson(const ParameterSet& params) {
  nlohmann::json matrices = nlohmann::json::object();
  for (const auto& [name, tensor] : params) {
    matrices[name] = {{"shape", tensor.shape}, {"data", tensor.values}};
  }
  return matrices;
}

ParameterSet ParameterSetFromJson(const nlohmann::json& matrices) {
  if (!matrices.is_object()) throw FormatError("parameters must be a JSON object");
  ParameterSet params;
  for (const auto& [name, entry] : matrices.items()) {
    Tensor t;
    try {
      t.shape = entry.at("shape").get<std::vector<std::size_t>>();
      t.values = entry.at("data").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("parameter " + name + ": " + e.what());
    }
    if (t.values.size() != t.NumElements()) {
      throw FormatError("parameter " + name + ": data length does not match shape");
    }
    for (double v : t.values) {
      if (!std::isfinite(v)) throw FormatError("parameter " + name + " is not finite");
    }
    params.emplace(name, std::move(t));
  }
  return params;
}

ParameterSet LoadParameterSet(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  if (!doc.contains("matrices")) throw FormatError(path + ": missing matrices");
  return ParameterSetFromJson(doc.at("matrices"));
}

ParameterSet AverageCheckpoints(std::span<const ParameterSet> sets) {
  if (sets.empty()) throw std::invalid_argument("no checkpoints to average");
  ParameterSet mean = sets[0];
  for (std::size_t s = 1; s < sets.size(); ++s) {
    if (sets[s].size() != mean.size()) {
      throw std::invalid_argument("checkpoints have different parameter names");
    }
    for (auto& [name, tensor] : mean) {
      const auto it = sets[s].find(name);
      if (it == sets[s].end()) throw std::invalid_argument("parameter " + name + " missing");
      if (it->second.shape != tensor.shape) {
        throw std::invalid_argument("parameter " + name + " has mismatched shapes");
      }
      for (std::size_t i = 0; i < tensor.values.size(); ++i) {
        tensor.values[i] += it->second.values[i];
      }
    }
  }
  const double n = static_cast<double>(sets.size());
  for (auto& [name, tensor] : mean) {
    for (double& v : tensor.values) v /= n;
  }
  return mean;
}

}  // namespace fusebeam
