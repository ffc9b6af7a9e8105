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

#include "fusebeam/frontend/modgd.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace fusebeam {

void ModgdParams::Validate(int fft_size) const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("MODGD gamma must lie in (0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("MODGD alpha must lie in (0, 1]");
  if (lifter_len < 1 || lifter_len >= fft_size / 2) {
    throw std::invalid_argument("MODGD lifter length must lie in [1, fft_size / 2)");
  }
  if (num_coeffs < 0 || num_coeffs > fft_size / 2 + 1) {
    throw std::invalid_argument("MODGD num_coeffs exceeds the number of bins");
  }
}

std::vector<double> RawGroupDelay(std::span<const double> frame,
                                  int fft_size) {
  std::vector<double> ramped(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) ramped[n] = static_cast<double>(n) * frame[n];
  const auto x = Dft(frame, fft_size);
  const auto y = Dft(ramped, fft_size);
  const int num_bins = fft_size / 2 + 1;
  std::vector<double> tau(num_bins, 0.0);
  for (int k = 0; k < num_bins; ++k) {
    const double power = std::norm(x[k]);
    if (power > 0.0) {
      tau[k] = (x[k].real() * y[k].real() + x[k].imag() * y[k].imag()) / power;
    }
  }
  return tau;
}

std::vector<double> CepstralSmoothedMagnitude(
    std::span<const std::complex<double>> spectrum, int lifter_len) {
  const int n = static_cast<int>(spectrum.size());
  std::vector<std::complex<double>> log_mag(n), cepstrum, smoothed;
  for (int k = 0; k < n; ++k) {
    log_mag[k] = std::log(std::max(std::abs(spectrum[k]), kLogFloor));
  }
  Eigen::FFT<double> fft;
  fft.inv(cepstrum, log_mag);
  for (int q = lifter_len; q <= n - lifter_len; ++q) cepstrum[q] = 0.0;
  fft.fwd(smoothed, cepstrum);
  std::vector<double> magnitude(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) magnitude[k] = std::exp(smoothed[k].real());
  return magnitude;
}

std::vector<double> ModifiedGroupDelay(std::span<const double> frame,
                                       int fft_size, const ModgdParams& params) {
  params.Validate(fft_size);
  std::vector<double> ramped(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) ramped[n] = static_cast<double>(n) * frame[n];
  const auto x = Dft(frame, fft_size);
  const auto y = Dft(ramped, fft_size);
  const std::vector<double> smoothed = CepstralSmoothedMagnitude(x, params.lifter_len);
  const int num_bins = fft_size / 2 + 1;
  std::vector<double> tau(num_bins);
  for (int k = 0; k < num_bins; ++k) {
    const double cross = x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    const double scaled = cross / std::pow(smoothed[k], 2.0 * params.gamma);
    const double sign = scaled > 0.0 ? 1.0 : (scaled < 0.0 ? -1.0 : 0.0);
    tau[k] = sign * std::pow(std::abs(scaled), params.alpha);
  }
  return tau;
}

FeatureMatrix ModgdFeatures(const AudioBuffer& audio, const FrameConfig& cfg,
                            const ModgdParams& params) {
  const RowMatrix frames = FrameSignal(audio, cfg);
  const int frame_length = static_cast<int>(frames.cols());
  const int fft_size = FftSizeFor(frame_length);
  params.Validate(fft_size);
  const int num_bins = fft_size / 2 + 1;
  const int dim = params.num_coeffs > 0 ? params.num_coeffs : num_bins;
  RowMatrix dct;
  if (params.num_coeffs > 0) dct = DctMatrix(num_bins).topRows(params.num_coeffs);

  RowMatrix out(frames.rows(), dim);
  std::vector<double> frame(frame_length);
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    for (int n = 0; n < frame_length; ++n) frame[n] = frames(t, n);
    const std::vector<double> tau = ModifiedGroupDelay(frame, fft_size, params);
    const Eigen::Map<const Eigen::RowVectorXd> row(tau.data(), num_bins);
    if (params.num_coeffs > 0) {
      out.row(t) = row * dct.transpose();
    } else {
      out.row(t) = row;
    }
  }
  FeatureMatrix f;
  f.data = std::move(out);
  f.frontend = Frontend::kModgd;
  f.frame_config = cfg;
  f.sample_rate = audio.sample_rate;
  return f;
}

}  // namespace fusebeam
