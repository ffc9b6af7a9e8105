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

#include "fusebeam/frontend/filterbank.h"

#include <cmath>
#include <stdexcept>

namespace fusebeam {

FilterbankSpec FilterbankSpec::Mel(int num_filters) {
  FilterbankSpec spec;
  spec.kind = FilterbankKind::kMelTriangular;
  spec.num_filters = num_filters;
  return spec;
}

FilterbankSpec FilterbankSpec::Gammatone(int num_filters) {
  FilterbankSpec spec;
  spec.kind = FilterbankKind::kGammatoneErb;
  spec.num_filters = num_filters;
  return spec;
}

FilterbankSpec FilterbankSpec::Cqt(int num_filters, double f_min,
                                   int bins_per_octave) {
  FilterbankSpec spec;
  spec.kind = FilterbankKind::kCqtLog;
  spec.num_filters = num_filters;
  spec.f_min = f_min;
  spec.bins_per_octave = bins_per_octave;
  return spec;
}

double FilterbankSpec::ResolvedFMax(int sample_rate) const {
  return f_max > 0.0 ? f_max : sample_rate / 2.0;
}

void FilterbankSpec::Validate(int sample_rate) const {
  const double nyquist = sample_rate / 2.0;
  if (num_filters < 1) throw std::invalid_argument("num_filters must be >= 1");
  if (kind == FilterbankKind::kCqtLog) {
    if (!(f_min > 0.0)) throw std::invalid_argument("CQT f_min must be positive");
    if (bins_per_octave < 1) throw std::invalid_argument("bins_per_octave must be >= 1");
    const double top =
        f_min * std::pow(2.0, static_cast<double>(num_filters) / bins_per_octave);
    if (top > nyquist) {
      throw std::invalid_argument("CQT top bin " + std::to_string(top) +
                                  " Hz lies above Nyquist");
    }
    return;
  }
  const double hi = ResolvedFMax(sample_rate);
  if (f_min < 0.0 || !(f_min < hi)) {
    throw std::invalid_argument("filterbank needs 0 <= f_min < f_max");
  }
  if (hi > nyquist) throw std::invalid_argument("f_max lies above Nyquist");
  if (kind == FilterbankKind::kGammatoneErb && gammatone_order < 1) {
    throw std::invalid_argument("gammatone order must be >= 1");
  }
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

double ErbBandwidth(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }

double HzToErbRate(double hz) {
  return 21.4 * std::log10(4.37 * hz / 1000.0 + 1.0);
}

double ErbRateToHz(double erb_rate) {
  return (std::pow(10.0, erb_rate / 21.4) - 1.0) * 1000.0 / 4.37;
}

namespace {

// num_filters + 2 equally spaced mel edges.
std::vector<double> MelEdges(const FilterbankSpec& spec, int sample_rate) {
  const double lo = HzToMel(spec.f_min);
  const double hi = HzToMel(spec.ResolvedFMax(sample_rate));
  std::vector<double> edges(spec.num_filters + 2);
  for (int i = 0; i < spec.num_filters + 2; ++i) {
    edges[i] = lo + (hi - lo) * i / (spec.num_filters + 1);
  }
  return edges;
}

}  // namespace

std::vector<double> MelCenterFrequencies(const FilterbankSpec& spec,
                                         int sample_rate) {
  spec.Validate(sample_rate);
  const std::vector<double> edges = MelEdges(spec, sample_rate);
  std::vector<double> centers(spec.num_filters);
  for (int j = 0; j < spec.num_filters; ++j) centers[j] = MelToHz(edges[j + 1]);
  return centers;
}

RowMatrix MelFilterbank(const FilterbankSpec& spec, int sample_rate,
                        int fft_size) {
  spec.Validate(sample_rate);
  const std::vector<double> edges = MelEdges(spec, sample_rate);
  const int num_bins = fft_size / 2 + 1;
  RowMatrix weights = RowMatrix::Zero(num_bins, spec.num_filters);
  for (int k = 0; k < num_bins; ++k) {
    const double mel = HzToMel(static_cast<double>(k) * sample_rate / fft_size);
    for (int j = 0; j < spec.num_filters; ++j) {
      const double left = edges[j], center = edges[j + 1], right = edges[j + 2];
      if (mel > left && mel <= center) {
        weights(k, j) = (mel - left) / (center - left);
      } else if (mel > center && mel < right) {
        weights(k, j) = (right - mel) / (right - center);
      }
    }
  }
  return weights;
}

std::vector<double> GammatoneCenterFrequencies(const FilterbankSpec& spec,
                                               int sample_rate) {
  spec.Validate(sample_rate);
  const double lo = HzToErbRate(spec.f_min);
  const double hi = HzToErbRate(spec.ResolvedFMax(sample_rate));
  std::vector<double> centers(spec.num_filters);
  if (spec.num_filters == 1) {
    centers[0] = ErbRateToHz(0.5 * (lo + hi));
    return centers;
  }
  for (int j = 0; j < spec.num_filters; ++j) {
    centers[j] = ErbRateToHz(lo + (hi - lo) * j / (spec.num_filters - 1));
  }
  // Keep the endpoints exact despite the round trip through the ERB scale.
  centers.front() = spec.f_min;
  centers.back() = spec.ResolvedFMax(sample_rate);
  return centers;
}

std::vector<double> CqtCenterFrequencies(const FilterbankSpec& spec) {
  std::vector<double> centers(spec.num_filters);
  for (int k = 0; k < spec.num_filters; ++k) {
    centers[k] =
        spec.f_min * std::pow(2.0, static_cast<double>(k) / spec.bins_per_octave);
  }
  return centers;
}

double CqtQualityFactor(int bins_per_octave) {
  return 1.0 / (std::pow(2.0, 1.0 / bins_per_octave) - 1.0);
}

}  // namespace fusebeam
