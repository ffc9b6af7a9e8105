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

#ifndef FUSEBEAM_FRONTEND_FEATURE_MATRIX_H_
#define FUSEBEAM_FRONTEND_FEATURE_MATRIX_H_

#include <cstdint>
#include <string>

#include "fusebeam/frontend/framing.h"

namespace fusebeam {

// The six audio representations. Numeric values are the FEAT1 tags.
enum class Frontend : std::uint8_t {
  kMel = 0,
  kMfcc = 1,
  kGamma = 2,
  kCqt = 3,
  kModgd = 4,
  kSymlet = 5,
};

std::string FrontendName(Frontend frontend);
// Accepts the upper- or lower-case names ("MEL", "modgd", ...).
Frontend ParseFrontend(const std::string& name);

// T x D features, one frame per row.
struct FeatureMatrix {
  RowMatrix data;
  Frontend frontend = Frontend::kMel;
  FrameConfig frame_config;
  int sample_rate = 16000;

  int num_frames() const { return static_cast<int>(data.rows()); }
  int dim() const { return static_cast<int>(data.cols()); }

  // Throws std::invalid_argument on empty or non-finite data.
  void Validate() const;
};

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_FEATURE_MATRIX_H_
