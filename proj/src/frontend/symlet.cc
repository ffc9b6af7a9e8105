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

#include "fusebeam/frontend/symlet.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

namespace fusebeam {
namespace {

#include "symlet_filters.inc"

std::span<const double> SymletDecLo(int order) {
  switch (order) {
    case 2: return kSym2DecLo;
    case 3: return kSym3DecLo;
    case 4: return kSym4DecLo;
    case 5: return kSym5DecLo;
    case 6: return kSym6DecLo;
    case 7: return kSym7DecLo;
    case 8: return kSym8DecLo;
    case 9: return kSym9DecLo;
    case 10: return kSym10DecLo;
    default:
      throw std::invalid_argument("symlet order must lie in [2, 10], got " +
                                  std::to_string(order));
  }
}

}  // namespace

void SymletParams::Validate(int frame_length) const {
  SymletDecLo(wavelet_order);
  if (depth < 1 || depth > 20) throw std::invalid_argument("symlet depth must lie in [1, 20]");
  if (frame_length < (1 << depth)) {
    throw std::invalid_argument("frame of " + std::to_string(frame_length) +
                                " samples is too short for depth " +
                                std::to_string(depth));
  }
}

WaveletFilters WaveletFilters::Symlet(int order) {
  const std::span<const double> dec_lo = SymletDecLo(order);
  WaveletFilters f;
  // Correlating with the reversed decomposition filter is convolution with
  // the filter itself.
  f.lowpass.assign(dec_lo.rbegin(), dec_lo.rend());
  const int taps = static_cast<int>(f.lowpass.size());
  f.highpass.resize(taps);
  for (int n = 0; n < taps; ++n) {
    f.highpass[n] = (n % 2 == 0 ? 1.0 : -1.0) * f.lowpass[taps - 1 - n];
  }
  return f;
}

void AnalysisStep(std::span<const double> x, const WaveletFilters& filters,
                  std::vector<double>* approx, std::vector<double>* detail) {
  const int length = static_cast<int>(x.size());
  if (length < 2 || length % 2 != 0) {
    throw std::invalid_argument("analysis input length must be even");
  }
  const int half = length / 2;
  const int taps = static_cast<int>(filters.lowpass.size());
  approx->assign(half, 0.0);
  detail->assign(half, 0.0);
  for (int k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (int n = 0; n < taps; ++n) {
      const double v = x[(2 * k + n) % length];
      a += filters.lowpass[n] * v;
      d += filters.highpass[n] * v;
    }
    (*approx)[k] = a;
    (*detail)[k] = d;
  }
}

std::vector<double> SynthesisStep(std::span<const double> approx,
                                  std::span<const double> detail,
                                  const WaveletFilters& filters) {
  if (approx.size() != detail.size()) {
    throw std::invalid_argument("approximation and detail lengths differ");
  }
  const int half = static_cast<int>(approx.size());
  const int length = 2 * half;
  const int taps = static_cast<int>(filters.lowpass.size());
  std::vector<double> x(length, 0.0);
  for (int k = 0; k < half; ++k) {
    for (int n = 0; n < taps; ++n) {
      x[(2 * k + n) % length] +=
          filters.lowpass[n] * approx[k] + filters.highpass[n] * detail[k];
    }
  }
  return x;
}

WaveletPacketTree::WaveletPacketTree(std::span<const double> x,
                                     const WaveletFilters& filters, int depth) {
  if (depth < 0 || x.size() % (std::size_t{1} << depth) != 0) {
    throw std::invalid_argument("input length must be a multiple of 2^depth");
  }
  levels_.resize(depth + 1);
  levels_[0].emplace_back(x.begin(), x.end());
  for (int level = 1; level <= depth; ++level) {
    levels_[level].resize(std::size_t{1} << level);
    for (std::size_t i = 0; i < levels_[level - 1].size(); ++i) {
      AnalysisStep(levels_[level - 1][i], filters, &levels_[level][2 * i],
                   &levels_[level][2 * i + 1]);
    }
  }
}

std::vector<const std::vector<double>*>
WaveletPacketTree::FrequencyOrderedLeaves() const {
  const auto& leaves = levels_.back();
  std::vector<const std::vector<double>*> ordered(leaves.size());
  // The high-pass branch mirrors the spectrum, so natural order is the Gray
  // code of frequency order.
  for (std::size_t band = 0; band < leaves.size(); ++band) {
    ordered[band] = &leaves[band ^ (band >> 1)];
  }
  return ordered;
}

double ShannonEntropyCost(std::span<const double> coeffs) {
  double cost = 0.0;
  for (double c : coeffs) {
    const double e = c * c;
    if (e > 0.0) cost -= e * std::log(e);
  }
  return cost;
}

std::vector<PacketNode> WaveletPacketTree::BestBasis() const {
  const int max_level = depth();
  // best[l][i]: chosen nodes and their cost for the subtree at (l, i).
  std::vector<std::vector<std::pair<double, std::vector<PacketNode>>>> best(
      max_level + 1);
  for (int level = max_level; level >= 0; --level) {
    best[level].resize(levels_[level].size());
    for (std::size_t i = 0; i < levels_[level].size(); ++i) {
      const double own = ShannonEntropyCost(levels_[level][i]);
      auto& slot = best[level][i];
      slot = {own, {PacketNode{level, static_cast<int>(i)}}};
      if (level == max_level) continue;
      const auto& left = best[level + 1][2 * i];
      const auto& right = best[level + 1][2 * i + 1];
      if (left.first + right.first < own) {
        slot.first = left.first + right.first;
        slot.second = left.second;
        slot.second.insert(slot.second.end(), right.second.begin(), right.second.end());
      }
    }
  }
  return best[0][0].second;
}

SymletResult SymletAnalysis(const AudioBuffer& audio, const FrameConfig& cfg,
                            const SymletParams& params) {
  const RowMatrix frames = FrameSignal(audio, cfg);
  const int frame_length = static_cast<int>(frames.cols());
  params.Validate(frame_length);
  const WaveletFilters filters = WaveletFilters::Symlet(params.wavelet_order);
  const int block = 1 << params.depth;
  const int padded_length = (frame_length + block - 1) / block * block;

  SymletResult result;
  RowMatrix out(frames.rows(), block);
  std::vector<double> frame(padded_length, 0.0);
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    for (int n = 0; n < frame_length; ++n) frame[n] = frames(t, n);
    const WaveletPacketTree tree(frame, filters, params.depth);
    const auto leaves = tree.FrequencyOrderedLeaves();
    for (int b = 0; b < block; ++b) {
      double energy = 0.0;
      for (double c : *leaves[b]) energy += c * c;
      out(t, b) = std::log(std::max(energy, kLogFloor));
    }
    result.best_basis.push_back(tree.BestBasis());
  }
  result.features.data = std::move(out);
  result.features.frontend = Frontend::kSymlet;
  result.features.frame_config = cfg;
  result.features.sample_rate = audio.sample_rate;
  return result;
}

FeatureMatrix SymletFeatures(const AudioBuffer& audio, const FrameConfig& cfg,
                             const SymletParams& params) {
  return SymletAnalysis(audio, cfg, params).features;
}

}  // namespace fusebeam
