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

#include "fusebeam/frontend/framing.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "fusebeam/error.h"

namespace fusebeam {

std::string WindowTypeName(WindowType window) {
  switch (window) {
    case WindowType::kHann: return "hann";
    case WindowType::kHamming: return "hamming";
    case WindowType::kRectangular: return "rectangular";
  }
  return "hann";
}

WindowType ParseWindowType(const std::string& name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "hamming") return WindowType::kHamming;
  if (name == "rectangular") return WindowType::kRectangular;
  throw ConfigError("unknown window type: " + name);
}

int FrameConfig::FrameLength(int sample_rate) const {
  return static_cast<int>(std::lround(frame_length_ms * sample_rate / 1000.0));
}

int FrameConfig::HopLength(int sample_rate) const {
  return static_cast<int>(std::lround(hop_length_ms * sample_rate / 1000.0));
}

void FrameConfig::Validate(int sample_rate) const {
  if (!(frame_length_ms > 0) || !(hop_length_ms > 0)) {
    throw std::invalid_argument("frame and hop lengths must be positive");
  }
  if (hop_length_ms > frame_length_ms) {
    throw std::invalid_argument("hop length exceeds frame length");
  }
  if (FrameLength(sample_rate) < 2) {
    throw std::invalid_argument("frame must span at least 2 samples");
  }
  if (HopLength(sample_rate) < 1) {
    throw std::invalid_argument("hop must span at least 1 sample");
  }
}

std::vector<double> MakeWindow(WindowType window, int length) {
  std::vector<double> w(length, 1.0);
  if (window == WindowType::kRectangular || length < 2) return w;
  const double a = window == WindowType::kHann ? 0.5 : 0.54;
  const double b = 1.0 - a;
  for (int n = 0; n < length; ++n) {
    w[n] = a - b * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  }
  return w;
}

int NumFrames(int num_samples, int frame_length, int hop_length) {
  if (num_samples <= frame_length) return 1;
  return 1 + (num_samples - frame_length) / hop_length;
}

RowMatrix FrameSamples(std::span<const double> samples, int sample_rate,
                       const FrameConfig& cfg, bool apply_window) {
  cfg.Validate(sample_rate);
  if (samples.empty()) throw std::invalid_argument("audio is empty");
  const int frame_length = cfg.FrameLength(sample_rate);
  const int hop = cfg.HopLength(sample_rate);
  const int num_samples = static_cast<int>(samples.size());
  const int num_frames = NumFrames(num_samples, frame_length, hop);
  const std::vector<double> window =
      MakeWindow(apply_window ? cfg.window : WindowType::kRectangular,
                 frame_length);
  RowMatrix frames = RowMatrix::Zero(num_frames, frame_length);
  for (int t = 0; t < num_frames; ++t) {
    const int start = t * hop;
    for (int n = 0; n < frame_length && start + n < num_samples; ++n) {
      frames(t, n) = samples[start + n] * window[n];
    }
  }
  return frames;
}

RowMatrix FrameSignal(const AudioBuffer& audio, const FrameConfig& cfg,
                      bool apply_window) {
  audio.Validate();
  return FrameSamples(audio.samples, audio.sample_rate, cfg, apply_window);
}

int FftSizeFor(int frame_length) {
  int n = 1;
  while (n < frame_length) n <<= 1;
  return n;
}

std::vector<std::complex<double>> Dft(std::span<const double> x,
                                      int fft_size) {
  if (fft_size < static_cast<int>(x.size())) {
    throw std::invalid_argument("FFT size smaller than frame");
  }
  std::vector<std::complex<double>> in(fft_size), out;
  for (std::size_t n = 0; n < x.size(); ++n) in[n] = x[n];
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return out;
}

ComplexRowMatrix Stft(const RowMatrix& frames, int fft_size) {
  const int frame_length = static_cast<int>(frames.cols());
  if (fft_size == 0) fft_size = FftSizeFor(frame_length);
  if (fft_size < frame_length) {
    throw std::invalid_argument("FFT size smaller than frame");
  }
  const int num_bins = fft_size / 2 + 1;
  ComplexRowMatrix out(frames.rows(), num_bins);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(fft_size), spectrum;
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    std::fill(in.begin(), in.end(), std::complex<double>());
    for (int n = 0; n < frame_length; ++n) in[n] = frames(t, n);
    fft.fwd(spectrum, in);
    for (int k = 0; k < num_bins; ++k) out(t, k) = spectrum[k];
  }
  return out;
}

RowMatrix DctMatrix(int n) {
  if (n < 1) throw std::invalid_argument("DCT size must be positive");
  RowMatrix c(n, n);
  const double scale0 = std::sqrt(1.0 / n), scale = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      c(k, i) = (k == 0 ? scale0 : scale) *
                std::cos(std::numbers::pi * k * (i + 0.5) / n);
    }
  }
  return c;
}

}  // namespace fusebeam
