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

#include "fusebeam/decode/fusion.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fusebeam/error.h"

namespace fusebeam {

double FusionWeights::AttentionMass() const {
  double mass = 0.0;
  for (const auto& a : alpha) mass += a[kAttention];
  return mass;
}

void FusionWeights::Validate() const {
  if (alpha.empty()) throw ConfigError("fusion weights: need at least one model");
  double total = 0.0;
  for (const auto& a : alpha) {
    for (double w : a) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ConfigError("fusion weights: alpha entries must be finite and >= 0");
      }
      total += w;
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("fusion weights: alpha must sum to 1, got " + std::to_string(total));
  }
  if (!(lm_weight >= 0.0) || !std::isfinite(lm_weight)) {
    throw ConfigError("fusion weights: lm_weight must be finite and >= 0");
  }
}

FusionWeights FusionWeights::Uniform(int num_models, double ctc_weight) {
  if (num_models < 1) throw ConfigError("fusion weights: need at least one model");
  FusionWeights w;
  w.alpha.assign(num_models, {(1.0 - ctc_weight) / num_models, ctc_weight / num_models});
  return w;
}

FusionWeights FusionWeights::FromLambda(double lambda) {
  FusionWeights w;
  w.alpha = {{1.0 - lambda, lambda}};
  return w;
}

FusionWeights FusionWeights::ValidationWeighted(std::span<const double> dev_errors,
                                                double ctc_weight) {
  if (dev_errors.empty()) throw ConfigError("fusion weights: need at least one model");
  std::vector<double> inverse;
  for (double e : dev_errors) {
    if (!(e > 0.0)) throw ConfigError("fusion weights: dev errors must be positive");
    inverse.push_back(1.0 / e);
  }
  const double norm = std::accumulate(inverse.begin(), inverse.end(), 0.0);
  FusionWeights w;
  for (double v : inverse) w.alpha.push_back({(1.0 - ctc_weight) * v / norm, ctc_weight * v / norm});
  return w;
}

int DecodeConfig::PreBeamSize() const {
  return pre_beam_size > 0 ? pre_beam_size
                           : static_cast<int>(std::ceil(1.5 * beam_size));
}

void DecodeConfig::Validate() const {
  if (beam_size < 1) throw ConfigError("beam_size must be >= 1");
  if (pre_beam_size < 0) throw ConfigError("pre_beam_size must be >= 0");
  if (PreBeamSize() < beam_size) throw ConfigError("pre_beam_size must be >= beam_size");
  if (!(maxlen_ratio > 0.0 && maxlen_ratio <= 1.0)) {
    throw ConfigError("maxlen_ratio must lie in (0, 1]");
  }
  if (subsample_factor < 1) throw ConfigError("subsample_factor must be >= 1");
  if (minlen < 0) throw ConfigError("minlen must be >= 0");
}

double JointScoreSingle(double att_logp, double ctc_logp, double lambda) {
  return lambda * ctc_logp + (1.0 - lambda) * att_logp;
}

double CombinedScore(const ScorePairs& scores, const FusionWeights& weights) {
  if (scores.size() != weights.alpha.size()) {
    throw std::invalid_argument("score matrix does not match the fusion weights");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += weights.alpha[i][kCtc] * scores[i][kCtc] +
             weights.alpha[i][kAttention] * scores[i][kAttention];
  }
  return total;
}

double EnsembleLmWeight(int num_models, double base) {
  if (num_models < 1) throw std::invalid_argument("num_models must be >= 1");
  return base * num_models;
}

int MaxOutputLength(int speech_frames, const DecodeConfig& cfg) {
  if (speech_frames < 1) throw std::invalid_argument("speech_frames must be >= 1");
  // The epsilon absorbs representation error, e.g. 0.6 * 1000 / 4.
  const double limit = cfg.maxlen_ratio * speech_frames / cfg.subsample_factor;
  return std::max(1, static_cast<int>(std::floor(limit + 1e-9)));
}

std::vector<TokenId> PreBeamSelect(std::span<const std::vector<double>> att_scores,
                                   const FusionWeights& weights, int pre_beam_size,
                                   std::span<const TokenId> candidates) {
  if (att_scores.size() != weights.alpha.size()) {
    throw std::invalid_argument("attention scores do not match the fusion weights");
  }
  std::vector<std::pair<double, TokenId>> keyed;
  keyed.reserve(candidates.size());
  for (TokenId c : candidates) {
    double key = 0.0;
    for (std::size_t i = 0; i < att_scores.size(); ++i) {
      key += weights.alpha[i][kAttention] * att_scores[i].at(c);
    }
    keyed.emplace_back(key, c);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::size_t keep = keyed.size();
  if (weights.AttentionMass() > 0.0) {
    keep = std::min<std::size_t>(keep, static_cast<std::size_t>(std::max(pre_beam_size, 1)));
  }
  std::vector<TokenId> selected;
  for (std::size_t k = 0; k < keep; ++k) selected.push_back(keyed[k].second);
  return selected;
}

}  // namespace fusebeam
