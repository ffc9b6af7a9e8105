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

#ifndef FUSEBEAM_FRONTEND_FILTERBANK_H_
#define FUSEBEAM_FRONTEND_FILTERBANK_H_

#include <string>
#include <vector>

#include "fusebeam/frontend/framing.h"

namespace fusebeam {

enum class FilterbankKind { kMelTriangular, kGammatoneErb, kCqtLog };

struct FilterbankSpec {
  FilterbankKind kind = FilterbankKind::kMelTriangular;
  int num_filters = 80;
  double f_min = 20.0;
  // <= 0 selects the Nyquist frequency.
  double f_max = 0.0;
  int bins_per_octave = 24;  // cqt_log only
  int gammatone_order = 4;   // gammatone_erb only

  static FilterbankSpec Mel(int num_filters = 80);
  static FilterbankSpec Gammatone(int num_filters = 80);
  static FilterbankSpec Cqt(int num_filters = 80, double f_min = 32.7,
                            int bins_per_octave = 24);

  double ResolvedFMax(int sample_rate) const;
  void Validate(int sample_rate) const;
};

// HTK mel scale.
double HzToMel(double hz);
double MelToHz(double mel);

// Glasberg & Moore equivalent rectangular bandwidth, and the ERB-rate scale
// it integrates to.
double ErbBandwidth(double hz);
double HzToErbRate(double hz);
double ErbRateToHz(double erb_rate);

// Triangular filters uniformly spaced on the mel scale, as a
// (fft_size / 2 + 1) x num_filters weight matrix.
RowMatrix MelFilterbank(const FilterbankSpec& spec, int sample_rate,
                        int fft_size);
std::vector<double> MelCenterFrequencies(const FilterbankSpec& spec,
                                         int sample_rate);

// Center frequencies uniformly spaced on the ERB-rate scale between f_min
// and f_max inclusive.
std::vector<double> GammatoneCenterFrequencies(const FilterbankSpec& spec,
                                               int sample_rate);

// f_k = f_min * 2^(k / B).
std::vector<double> CqtCenterFrequencies(const FilterbankSpec& spec);
// Q = 1 / (2^(1/B) - 1).
double CqtQualityFactor(int bins_per_octave);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_FILTERBANK_H_
