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

#ifndef FUSEBEAM_METRICS_PARAMETER_SET_H_
#define FUSEBEAM_METRICS_PARAMETER_SET_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace fusebeam {

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;  // row-major

  std::size_t NumElements() const;
  bool operator==(const Tensor&) const = default;
};

// Named model parameters. Stored as the "matrices" object of a TOYM1 file:
//   {"name": {"shape": [rows, cols], "data": [...]}, ...}
using ParameterSet = std::map<std::string, Tensor>;

nlohmann::json ParameterSetToJson(const ParameterSet& params);
ParameterSet ParameterSetFromJson(const nlohmann::json& matrices);

// Reads the parameters of a TOYM1 file.
ParameterSet LoadParameterSet(const std::string& path);

// Elementwise mean. All sets must carry the same names and shapes.
ParameterSet AverageCheckpoints(std::span<const ParameterSet> sets);

}  // namespace fusebeam

#endif  // FUSEBEAM_METRICS_PARAMETER_SET_H_
