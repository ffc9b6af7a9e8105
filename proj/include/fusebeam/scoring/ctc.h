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

#ifndef FUSEBEAM_SCORING_CTC_H_
#define FUSEBEAM_SCORING_CTC_H_

#include <span>
#include <vector>

#include "fusebeam/frontend/framing.h"
#include "fusebeam/scoring/vocabulary.h"

namespace fusebeam {

// Per-frame token log-probabilities (T' x N), blank included.
struct CtcPosteriorGrid {
  RowMatrix log_probs;

  int num_frames() const { return static_cast<int>(log_probs.rows()); }
  int vocab_size() const { return static_cast<int>(log_probs.cols()); }

  // Rows must log-sum-exp to 0 within `tolerance` and be finite.
  void Validate(double tolerance = 1e-6) const;
};

// Forward variables of one prefix: log-probability that the first t + 1
// frames emit exactly the prefix, ending in a non-blank (r_nonblank) or a
// blank (r_blank). prefix_logp is the log-probability of all label sequences
// starting with the prefix.
struct CtcPrefixState {
  std::vector<double> r_nonblank;
  std::vector<double> r_blank;
  double prefix_logp = 0.0;
  TokenId last_token = -1;
  int length = 0;  // labels after sos
};

// Result of extending a prefix g by one candidate c.
struct CtcExtension {
  TokenId token = -1;
  // log p(g + c) - log p(g): the incremental CTC score. For eos this is the
  // full-sequence probability of g minus the prefix probability of g.
  double score = 0.0;
  double prefix_logp = 0.0;
  CtcPrefixState state;  // empty for eos
};

// Incremental CTC prefix scorer over one utterance's posterior grid.
class CtcPrefixScorer {
 public:
  CtcPrefixScorer(const CtcPosteriorGrid& grid, const Vocabulary& vocab);

  CtcPrefixState InitialState() const;

  // `prefix` starts with sos and must agree with `state`. Blank candidates
  // are rejected.
  std::vector<CtcExtension> Extend(std::span<const TokenId> prefix,
                                   const CtcPrefixState& state,
                                   std::span<const TokenId> candidates) const;

  // Recomputes the state of a prefix from the initial state.
  CtcPrefixState StateFor(std::span<const TokenId> prefix) const;

 private:
  const CtcPosteriorGrid* grid_;
  const Vocabulary* vocab_;
};

// log sum over all alignments of `labels` (no blanks, no sos/eos), by the
// standard forward algorithm. kLogZero when no alignment exists.
double CtcSequenceLogProb(const CtcPosteriorGrid& grid,
                          std::span<const TokenId> labels, TokenId blank_id);

}  // namespace fusebeam

#endif  // FUSEBEAM_SCORING_CTC_H_
