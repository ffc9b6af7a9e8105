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

#ifndef FUSEBEAM_FRONTEND_SPECTRAL_FEATURES_H_
#define FUSEBEAM_FRONTEND_SPECTRAL_FEATURES_H_

#include <span>
#include <vector>

#include "fusebeam/frontend/audio.h"
#include "fusebeam/frontend/feature_matrix.h"
#include "fusebeam/frontend/filterbank.h"

namespace fusebeam {

// Log mel filterbank energies of the power spectrum.
FeatureMatrix MelSpectrogram(const AudioBuffer& audio, const FrameConfig& cfg,
                             const FilterbankSpec& spec);

// Orthonormal DCT-II of the log mel vector, first num_ceps coefficients.
FeatureMatrix Mfcc(const AudioBuffer& audio, const FrameConfig& cfg,
                   const FilterbankSpec& spec, int num_ceps = 13);

// Output of one gammatone filter centered at center_hz, realised as a
// complex-baseband cascade of `order` one-pole low-pass sections (unity gain
// at the center frequency).
std::vector<double> GammatoneFilter(std::span<const double> x,
                                    int sample_rate, double center_hz,
                                    int order = 4);

// Log per-frame energies of an ERB-spaced gammatone filterbank.
FeatureMatrix GammatoneFeatures(const AudioBuffer& audio,
                                const FrameConfig& cfg,
                                const FilterbankSpec& spec);

// Kernel length of CQT bin k, clamped to the frame length.
int CqtKernelLength(double center_hz, int bins_per_octave, int sample_rate,
                    int frame_length);

// Frame-synchronous log-magnitude constant-Q spectrogram.
FeatureMatrix CqtFeatures(const AudioBuffer& audio, const FrameConfig& cfg,
                          const FilterbankSpec& spec);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_SPECTRAL_FEATURES_H_
