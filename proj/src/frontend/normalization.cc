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

#include "fusebeam/frontend/normalization.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fusebeam/error.h"
#include "json.hpp"

namespace fusebeam {

std::string NormalizationStats::ToJson() const {
  nlohmann::json j;
  j["dims"] = dim();
  j["mean"] = mean;
  j["std"] = std;
  return j.dump(2) + "\n";
}

NormalizationStats NormalizationStats::FromJson(const std::string& text) {
  NormalizationStats stats;
  try {
    const auto j = nlohmann::json::parse(text);
    stats.mean = j.at("mean").get<std::vector<double>>();
    stats.std = j.at("std").get<std::vector<double>>();
    if (j.contains("dims") && j.at("dims").get<int>() != stats.dim()) {
      throw FormatError("normalization stats: dims disagrees with mean length");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("normalization stats: ") + e.what());
  }
  if (stats.mean.size() != stats.std.size() || stats.mean.empty()) {
    throw FormatError("normalization stats: mean/std size mismatch");
  }
  for (double s : stats.std) {
    if (!(s > 0.0)) throw FormatError("normalization stats: std must be positive");
  }
  return stats;
}

void NormalizationStats::Save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path);
  os << ToJson();
}

NormalizationStats NormalizationStats::Load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return FromJson(ss.str());
}

NormalizationStats FitGlobalNormalization(
    std::span<const FeatureMatrix> features) {
  if (features.empty()) throw std::invalid_argument("no features to normalize");
  const int dim = features[0].dim();
  const Frontend frontend = features[0].frontend;
  std::vector<double> sum(dim, 0.0);
  long long frames = 0;
  for (const auto& f : features) {
    if (f.dim() != dim || f.frontend != frontend) {
      throw std::invalid_argument("heterogeneous feature dimensions or frontends");
    }
    for (Eigen::Index t = 0; t < f.data.rows(); ++t) {
      for (int d = 0; d < dim; ++d) sum[d] += f.data(t, d);
    }
    frames += f.data.rows();
  }
  if (frames == 0) throw std::invalid_argument("no frames to normalize");
  NormalizationStats stats;
  stats.mean.resize(dim);
  for (int d = 0; d < dim; ++d) stats.mean[d] = sum[d] / frames;
  // Second pass around the mean for accuracy.
  std::vector<double> sq(dim, 0.0);
  for (const auto& f : features) {
    for (Eigen::Index t = 0; t < f.data.rows(); ++t) {
      for (int d = 0; d < dim; ++d) {
        const double diff = f.data(t, d) - stats.mean[d];
        sq[d] += diff * diff;
      }
    }
  }
  stats.std.resize(dim);
  for (int d = 0; d < dim; ++d) {
    stats.std[d] = std::max(std::sqrt(sq[d] / frames), kStdFloor);
  }
  return stats;
}

namespace {

void CheckDims(const FeatureMatrix& f, const NormalizationStats& stats) {
  if (f.dim() != stats.dim()) {
    throw std::invalid_argument("feature dimension " + std::to_string(f.dim()) +
                                " does not match stats dimension " +
                                std::to_string(stats.dim()));
  }
}

}  // namespace

FeatureMatrix ApplyNormalization(const FeatureMatrix& f,
                                 const NormalizationStats& stats) {
  CheckDims(f, stats);
  FeatureMatrix out = f;
  for (Eigen::Index t = 0; t < out.data.rows(); ++t) {
    for (int d = 0; d < out.dim(); ++d) {
      out.data(t, d) = (f.data(t, d) - stats.mean[d]) / stats.std[d];
    }
  }
  return out;
}

FeatureMatrix RemoveNormalization(const FeatureMatrix& f,
                                  const NormalizationStats& stats) {
  CheckDims(f, stats);
  FeatureMatrix out = f;
  for (Eigen::Index t = 0; t < out.data.rows(); ++t) {
    for (int d = 0; d < out.dim(); ++d) {
      out.data(t, d) = f.data(t, d) * stats.std[d] + stats.mean[d];
    }
  }
  return out;
}

FeatureMatrix SpecMask(const FeatureMatrix& f, std::uint64_t seed,
                       MaskSpec time_masks, MaskSpec freq_masks) {
  const int frames = f.num_frames(), dim = f.dim();
  if (time_masks.count < 0 || freq_masks.count < 0 || time_masks.width < 0 ||
      freq_masks.width < 0) {
    throw std::invalid_argument("mask counts and widths must be non-negative");
  }
  if (time_masks.count > 0 && time_masks.width > frames) {
    throw std::invalid_argument("time mask wider than the utterance");
  }
  if (freq_masks.count > 0 && freq_masks.width > dim) {
    throw std::invalid_argument("frequency mask wider than the feature dimension");
  }
  FeatureMatrix out = f;
  if (frames == 0 || dim == 0) return out;
  const double fill = f.data.mean();
  std::mt19937_64 rng(seed);
  for (int m = 0; m < time_masks.count; ++m) {
    std::uniform_int_distribution<int> pick(0, frames - time_masks.width);
    const int start = pick(rng);
    out.data.middleRows(start, time_masks.width).setConstant(fill);
  }
  for (int m = 0; m < freq_masks.count; ++m) {
    std::uniform_int_distribution<int> pick(0, dim - freq_masks.width);
    const int start = pick(rng);
    out.data.middleCols(start, freq_masks.width).setConstant(fill);
  }
  return out;
}

}  // namespace fusebeam
