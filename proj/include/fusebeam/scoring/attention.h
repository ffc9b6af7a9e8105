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

#ifndef FUSEBEAM_SCORING_ATTENTION_H_
#define FUSEBEAM_SCORING_ATTENTION_H_

#include <span>
#include <vector>

#include "fusebeam/frontend/framing.h"
#include "fusebeam/scoring/vocabulary.h"

namespace fusebeam {

// Full scorer bound to one utterance: next-token log-probabilities over the
// whole vocabulary given a prefix that starts with sos.
class AttentionScorer {
 public:
  virtual ~AttentionScorer() = default;
  virtual int vocab_size() const = 0;
  virtual std::vector<double> LogProbs(std::span<const TokenId> prefix) const = 0;
};

// History-independent scorer: step n (labels after sos) reads row
// min(n, rows - 1) of a log-probability table.
class PositionalAttentionScorer : public AttentionScorer {
 public:
  explicit PositionalAttentionScorer(RowMatrix log_probs);

  int vocab_size() const override { return static_cast<int>(log_probs_.cols()); }
  std::vector<double> LogProbs(std::span<const TokenId> prefix) const override;

 private:
  RowMatrix log_probs_;
};

}  // namespace fusebeam

#endif  // FUSEBEAM_SCORING_ATTENTION_H_
