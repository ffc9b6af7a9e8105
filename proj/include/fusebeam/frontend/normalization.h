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

#ifndef FUSEBEAM_FRONTEND_NORMALIZATION_H_
#define FUSEBEAM_FRONTEND_NORMALIZATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fusebeam/frontend/feature_matrix.h"

namespace fusebeam {

inline constexpr double kStdFloor = 1e-10;

// Per-dimension global mean and (population) standard deviation.
struct NormalizationStats {
  std::vector<double> mean;
  std::vector<double> std;

  int dim() const { return static_cast<int>(mean.size()); }

  std::string ToJson() const;
  static NormalizationStats FromJson(const std::string& text);
  void Save(const std::string& path) const;
  static NormalizationStats Load(const std::string& path);
};

NormalizationStats FitGlobalNormalization(
    std::span<const FeatureMatrix> features);

// (x - mean) / std.
FeatureMatrix ApplyNormalization(const FeatureMatrix& f,
                                 const NormalizationStats& stats);
// x * std + mean.
FeatureMatrix RemoveNormalization(const FeatureMatrix& f,
                                  const NormalizationStats& stats);

// `count` masks of exactly `width` frames (or dims) each.
struct MaskSpec {
  int count = 0;
  int width = 0;
};

// Replaces randomly placed time and frequency stripes with the mean of the
// whole matrix. Deterministic for a fixed seed.
FeatureMatrix SpecMask(const FeatureMatrix& f, std::uint64_t seed,
                       MaskSpec time_masks, MaskSpec freq_masks);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_NORMALIZATION_H_
