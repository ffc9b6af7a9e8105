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

#include "fusebeam/frontend/spectral_features.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fusebeam {
namespace {

FeatureMatrix MakeFeatures(RowMatrix data, Frontend frontend,
                           const FrameConfig& cfg, int sample_rate) {
  FeatureMatrix f;
  f.data = std::move(data);
  f.frontend = frontend;
  f.frame_config = cfg;
  f.sample_rate = sample_rate;
  return f;
}

RowMatrix LogMelEnergies(const AudioBuffer& audio, const FrameConfig& cfg,
                         const FilterbankSpec& spec) {
  if (spec.kind != FilterbankKind::kMelTriangular) {
    throw std::invalid_argument("mel features need a mel_triangular filterbank");
  }
  spec.Validate(audio.sample_rate);
  const RowMatrix frames = FrameSignal(audio, cfg);
  const int fft_size = FftSizeFor(static_cast<int>(frames.cols()));
  const RowMatrix power = Stft(frames, fft_size).cwiseAbs2();
  const RowMatrix weights = MelFilterbank(spec, audio.sample_rate, fft_size);
  RowMatrix energies = power * weights;
  return energies.unaryExpr(
      [](double e) { return std::log(std::max(e, kLogFloor)); });
}

}  // namespace

FeatureMatrix MelSpectrogram(const AudioBuffer& audio, const FrameConfig& cfg,
                             const FilterbankSpec& spec) {
  return MakeFeatures(LogMelEnergies(audio, cfg, spec), Frontend::kMel, cfg,
                      audio.sample_rate);
}

FeatureMatrix Mfcc(const AudioBuffer& audio, const FrameConfig& cfg,
                   const FilterbankSpec& spec, int num_ceps) {
  if (num_ceps < 1 || num_ceps > spec.num_filters) {
    throw std::invalid_argument("num_ceps must lie in [1, num_filters]");
  }
  const RowMatrix log_mel = LogMelEnergies(audio, cfg, spec);
  const RowMatrix dct = DctMatrix(spec.num_filters).topRows(num_ceps);
  RowMatrix ceps = log_mel * dct.transpose();
  return MakeFeatures(std::move(ceps), Frontend::kMfcc, cfg, audio.sample_rate);
}

std::vector<double> GammatoneFilter(std::span<const double> x,
                                    int sample_rate, double center_hz,
                                    int order) {
  const double bandwidth = 1.019 * ErbBandwidth(center_hz);
  const double pole = std::exp(-2.0 * std::numbers::pi * bandwidth / sample_rate);
  const double omega = 2.0 * std::numbers::pi * center_hz / sample_rate;
  std::vector<std::complex<double>> stages(order);
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::complex<double> carrier = std::polar(1.0, omega * static_cast<double>(n));
    std::complex<double> v = x[n] * std::conj(carrier);
    for (auto& s : stages) {
      s = (1.0 - pole) * v + pole * s;
      v = s;
    }
    // Factor 2 restores the negative-frequency half removed by the shift.
    y[n] = 2.0 * (v * carrier).real();
  }
  return y;
}

FeatureMatrix GammatoneFeatures(const AudioBuffer& audio,
                                const FrameConfig& cfg,
                                const FilterbankSpec& spec) {
  if (spec.kind != FilterbankKind::kGammatoneErb) {
    throw std::invalid_argument("gammatone features need a gammatone_erb filterbank");
  }
  audio.Validate();
  cfg.Validate(audio.sample_rate);
  const std::vector<double> centers =
      GammatoneCenterFrequencies(spec, audio.sample_rate);
  const int frame_length = cfg.FrameLength(audio.sample_rate);
  std::vector<double> padded = audio.samples;
  if (static_cast<int>(padded.size()) < frame_length) padded.resize(frame_length, 0.0);

  const int num_frames = NumFrames(static_cast<int>(padded.size()), frame_length,
                                   cfg.HopLength(audio.sample_rate));
  RowMatrix out(num_frames, spec.num_filters);
  for (int j = 0; j < spec.num_filters; ++j) {
    const std::vector<double> y =
        GammatoneFilter(padded, audio.sample_rate, centers[j], spec.gammatone_order);
    const RowMatrix frames = FrameSamples(y, audio.sample_rate, cfg);
    for (int t = 0; t < num_frames; ++t) {
      out(t, j) = std::log(std::max(frames.row(t).squaredNorm(), kLogFloor));
    }
  }
  return MakeFeatures(std::move(out), Frontend::kGamma, cfg, audio.sample_rate);
}

int CqtKernelLength(double center_hz, int bins_per_octave, int sample_rate,
                    int frame_length) {
  const double natural =
      std::ceil(CqtQualityFactor(bins_per_octave) * sample_rate / center_hz);
  return std::max(2, static_cast<int>(std::min<double>(natural, frame_length)));
}

FeatureMatrix CqtFeatures(const AudioBuffer& audio, const FrameConfig& cfg,
                          const FilterbankSpec& spec) {
  if (spec.kind != FilterbankKind::kCqtLog) {
    throw std::invalid_argument("CQT features need a cqt_log filterbank");
  }
  spec.Validate(audio.sample_rate);
  const RowMatrix frames = FrameSignal(audio, cfg, /*apply_window=*/false);
  const int frame_length = static_cast<int>(frames.cols());
  const std::vector<double> centers = CqtCenterFrequencies(spec);

  // One windowed complex exponential per bin, centered in the frame and
  // normalized by its window sum.
  ComplexRowMatrix kernels = ComplexRowMatrix::Zero(spec.num_filters, frame_length);
  for (int k = 0; k < spec.num_filters; ++k) {
    const int length = CqtKernelLength(centers[k], spec.bins_per_octave,
                                       audio.sample_rate, frame_length);
    const std::vector<double> window = MakeWindow(cfg.window, length);
    double window_sum = 0.0;
    for (double w : window) window_sum += w;
    const int offset = (frame_length - length) / 2;
    const double omega = 2.0 * std::numbers::pi * centers[k] / audio.sample_rate;
    for (int n = 0; n < length; ++n) {
      kernels(k, offset + n) = std::polar(window[n] / window_sum, -omega * n);
    }
  }
  const ComplexRowMatrix response = frames.cast<std::complex<double>>() *
                                    kernels.transpose();
  RowMatrix out = response.cwiseAbs().unaryExpr(
      [](double m) { return std::log(std::max(m, kLogFloor)); });
  return MakeFeatures(std::move(out), Frontend::kCqt, cfg, audio.sample_rate);
}

}  // namespace fusebeam
