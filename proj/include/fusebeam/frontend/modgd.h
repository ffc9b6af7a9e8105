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

#ifndef FUSEBEAM_FRONTEND_MODGD_H_
#define FUSEBEAM_FRONTEND_MODGD_H_

#include <span>
#include <vector>

#include "fusebeam/frontend/audio.h"
#include "fusebeam/frontend/feature_matrix.h"

namespace fusebeam {

// Modified group delay parameters. The magnitude in the denominator is
// replaced by a cepstrally smoothed spectrum raised to 2 * gamma, and the
// result is compressed by |.|^alpha with its sign kept.
struct ModgdParams {
  double gamma = 0.9;
  double alpha = 0.4;
  int lifter_len = 8;
  // DCT coefficients kept per frame; 0 keeps the raw fft_size / 2 + 1 bins.
  int num_coeffs = 80;

  void Validate(int fft_size) const;
};

// (X_R Y_R + X_I Y_I) / |X|^2 with X = DFT(x), Y = DFT(n x(n)), over the
// fft_size / 2 + 1 non-negative bins. Bins where |X| vanishes give 0.
std::vector<double> RawGroupDelay(std::span<const double> frame,
                                  int fft_size);

// Cepstrally smoothed magnitude spectrum over fft_size / 2 + 1 bins.
std::vector<double> CepstralSmoothedMagnitude(
    std::span<const std::complex<double>> spectrum, int lifter_len);

// Per-bin modified group delay of one frame.
std::vector<double> ModifiedGroupDelay(std::span<const double> frame,
                                       int fft_size, const ModgdParams& params);

FeatureMatrix ModgdFeatures(const AudioBuffer& audio, const FrameConfig& cfg,
                            const ModgdParams& params = {});

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_MODGD_H_
