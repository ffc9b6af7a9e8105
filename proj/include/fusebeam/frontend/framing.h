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

#ifndef FUSEBEAM_FRONTEND_FRAMING_H_
#define FUSEBEAM_FRONTEND_FRAMING_H_

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fusebeam/frontend/audio.h"

namespace fusebeam {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexRowMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                       Eigen::Dynamic, Eigen::RowMajor>;

// Added to every energy before taking a log.
inline constexpr double kLogFloor = 1e-10;

enum class WindowType { kHann, kHamming, kRectangular };

std::string WindowTypeName(WindowType window);
WindowType ParseWindowType(const std::string& name);

struct FrameConfig {
  double frame_length_ms = 25.0;
  double hop_length_ms = 10.0;
  WindowType window = WindowType::kHann;

  int FrameLength(int sample_rate) const;
  int HopLength(int sample_rate) const;
  void Validate(int sample_rate) const;
};

// Symmetric window of the given length.
std::vector<double> MakeWindow(WindowType window, int length);

// 1 + floor((num_samples - frame_length) / hop), with inputs shorter than a
// frame counting as one zero-padded frame.
int NumFrames(int num_samples, int frame_length, int hop_length);

// Splits audio into overlapping frames, one per row. With apply_window the
// rows are multiplied by the configured window.
RowMatrix FrameSignal(const AudioBuffer& audio, const FrameConfig& cfg,
                      bool apply_window = true);

// Same framing applied to an arbitrary sample sequence (already padded or
// not) at the given rate.
RowMatrix FrameSamples(std::span<const double> samples, int sample_rate,
                       const FrameConfig& cfg, bool apply_window = true);

// Smallest power of two >= frame_length.
int FftSizeFor(int frame_length);

// DFT of each row zero-padded to fft_size; returns the fft_size / 2 + 1
// non-negative frequency bins. fft_size = 0 picks FftSizeFor(cols).
ComplexRowMatrix Stft(const RowMatrix& frames, int fft_size = 0);

// Full-length complex DFT of a real sequence zero-padded to fft_size.
std::vector<std::complex<double>> Dft(std::span<const double> x, int fft_size);

// Orthonormal DCT-II basis, one basis vector per row (n x n).
RowMatrix DctMatrix(int n);

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_FRAMING_H_
