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

#ifndef FUSEBEAM_FRONTEND_FRONTEND_H_
#define FUSEBEAM_FRONTEND_FRONTEND_H_

#include "fusebeam/frontend/audio.h"
#include "fusebeam/frontend/feature_matrix.h"
#include "fusebeam/frontend/filterbank.h"
#include "fusebeam/frontend/modgd.h"
#include "fusebeam/frontend/symlet.h"

#include "json.hpp"

namespace fusebeam {

// Everything needed to turn audio into one representation.
struct FrontendConfig {
  Frontend kind = Frontend::kMel;
  FrameConfig frame;
  // Mel filters for MEL/MFCC, gammatone filters for GAMMA, CQT bins for CQT.
  FilterbankSpec filterbank;
  int num_ceps = 13;
  ModgdParams modgd;
  SymletParams symlet;

  // Defaults for the given representation (CQT gets its own f_min and
  // filterbank kind).
  static FrontendConfig Defaults(Frontend kind);

  // Output feature dimension.
  int Dim(int sample_rate) const;
};

FeatureMatrix ExtractFeatures(const AudioBuffer& audio,
                              const FrontendConfig& cfg);

// JSON form used in run configs. Missing keys keep Defaults(kind).
nlohmann::json FrontendConfigToJson(const FrontendConfig& cfg);
FrontendConfig FrontendConfigFromJson(const nlohmann::json& j);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_FRONTEND_H_
