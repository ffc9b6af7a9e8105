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

#ifndef FUSEBEAM_DECODE_FUSION_H_
#define FUSEBEAM_DECODE_FUSION_H_

#include <array>
#include <span>
#include <vector>

#include "fusebeam/scoring/vocabulary.h"

namespace fusebeam {

// Column indices of a per-model score pair.
inline constexpr int kAttention = 0;
inline constexpr int kCtc = 1;

// Per-model, per-scorer log-scores: scores[i] = {attention, ctc}.
using ScorePairs = std::vector<std::array<double, 2>>;

// Late-fusion weights. alpha[i] = {attention weight, CTC weight} of model i;
// all weights are non-negative and sum to one over the whole matrix. The LM
// weight sits outside that simplex.
struct FusionWeights {
  ScorePairs alpha;
  double lm_weight = 0.0;

  int num_models() const { return static_cast<int>(alpha.size()); }
  double AttentionMass() const;

  // Throws ConfigError unless M >= 1, alpha >= 0, sum(alpha) = 1 +- 1e-9
  // and lm_weight >= 0.
  void Validate() const;

  // alpha[i] = {(1 - ctc_weight) / M, ctc_weight / M}.
  static FusionWeights Uniform(int num_models, double ctc_weight = 0.3);
  // Single model: alpha = {1 - lambda, lambda}.
  static FusionWeights FromLambda(double lambda);
  // alpha[i] proportional to 1 / dev_errors[i], scaled to the
  // (1 - ctc_weight, ctc_weight) split.
  static FusionWeights ValidationWeighted(std::span<const double> dev_errors,
                                          double ctc_weight = 0.3);
};

struct DecodeConfig {
  int beam_size = 5;
  int pre_beam_size = 0;  // 0 selects ceil(1.5 * beam_size)
  double maxlen_ratio = 0.6;
  int subsample_factor = 4;
  int minlen = 0;

  int PreBeamSize() const;
  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

// lambda * ctc + (1 - lambda) * att.
double JointScoreSingle(double att_logp, double ctc_logp, double lambda);

// sum_i alpha[i][att] * scores[i][att] + alpha[i][ctc] * scores[i][ctc].
// Reduces to JointScoreSingle bit for bit when M = 1.
double CombinedScore(const ScorePairs& scores, const FusionWeights& weights);

// One base LM weight per ensemble member.
double EnsembleLmWeight(int num_models, double base = 0.6);

// max(1, floor(maxlen_ratio * speech_frames / subsample_factor)).
int MaxOutputLength(int speech_frames, const DecodeConfig& cfg);

// Keeps the pre_beam_size candidates with the highest attention-weighted key
// sum_i alpha[i][att] * att_scores[i][c], ties to the lower token id. The
// result is ordered by key. With zero attention mass nothing is pruned.
std::vector<TokenId> PreBeamSelect(std::span<const std::vector<double>> att_scores,
                                   const FusionWeights& weights, int pre_beam_size,
                                   std::span<const TokenId> candidates);

}  // namespace fusebeam

#endif  // FUSEBEAM_DECODE_FUSION_H_
