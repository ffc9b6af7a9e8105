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

#ifndef FUSEBEAM_FRONTEND_SYMLET_H_
#define FUSEBEAM_FRONTEND_SYMLET_H_

#include <span>
#include <vector>

#include "fusebeam/frontend/audio.h"
#include "fusebeam/frontend/feature_matrix.h"

namespace fusebeam {

struct SymletParams {
  int wavelet_order = 8;  // sym2 .. sym10
  int depth = 6;

  void Validate(int frame_length) const;
};

// Orthonormal two-channel filter pair of a symlet.
struct WaveletFilters {
  std::vector<double> lowpass;
  std::vector<double> highpass;

  static WaveletFilters Symlet(int order);
};

// One level of periodized analysis; input length must be even.
void AnalysisStep(std::span<const double> x, const WaveletFilters& filters,
                  std::vector<double>* approx, std::vector<double>* detail);

// Adjoint of AnalysisStep; reconstructs the input exactly.
std::vector<double> SynthesisStep(std::span<const double> approx,
                                  std::span<const double> detail,
                                  const WaveletFilters& filters);

// Node (level, index) of a wavelet-packet tree; index is in natural
// (filter-bank) order within its level.
struct PacketNode {
  int level = 0;
  int index = 0;

  bool operator==(const PacketNode&) const = default;
};

// Full wavelet-packet tree: levels[l][i] holds the coefficients of node
// (l, i). The input length must be a multiple of 2^depth.
class WaveletPacketTree {
 public:
  WaveletPacketTree(std::span<const double> x, const WaveletFilters& filters,
                    int depth);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<double>& node(int level, int index) const {
    return levels_[level][index];
  }
  // Terminal nodes ordered by increasing frequency band.
  std::vector<const std::vector<double>*> FrequencyOrderedLeaves() const;

  // Coifman-Wickerhauser best basis under the Shannon entropy cost
  // -sum c^2 log c^2. A node is split only when its children cost less.
  std::vector<PacketNode> BestBasis() const;

 private:
  std::vector<std::vector<std::vector<double>>> levels_;
};

double ShannonEntropyCost(std::span<const double> coeffs);

struct SymletResult {
  FeatureMatrix features;
  // Best-basis tree per frame.
  std::vector<std::vector<PacketNode>> best_basis;
};

// Log-energies of the 2^depth frequency-ordered terminal subbands of the
// full wavelet-packet tree, per frame. Frames are zero-padded to a multiple
// of 2^depth.
SymletResult SymletAnalysis(const AudioBuffer& audio, const FrameConfig& cfg,
                            const SymletParams& params = {});

FeatureMatrix SymletFeatures(const AudioBuffer& audio, const FrameConfig& cfg,
                             const SymletParams& params = {});

}  // namespace fusebeam

#endif  // FUSEBEAM_FRONTEND_SYMLET_H_
