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

#ifndef FUSEBEAM_DECODE_BEAM_SEARCH_H_
#define FUSEBEAM_DECODE_BEAM_SEARCH_H_

#include <memory>
#include <span>
#include <vector>

#include "fusebeam/decode/fusion.h"
#include "fusebeam/scoring/attention.h"
#include "fusebeam/scoring/ctc.h"
#include "fusebeam/scoring/ngram_lm.h"
#include "fusebeam/scoring/vocabulary.h"

namespace fusebeam {

// One ensemble member as seen by the decoder.
struct ModelInputs {
  std::shared_ptr<const AttentionScorer> attention;
  CtcPosteriorGrid ctc;
  int speech_frames = 0;  // feature frames before subsampling
};

// Accumulated log-scores of one hypothesis, before weighting.
struct ScoreBreakdown {
  ScorePairs models;  // {attention, ctc} per model
  double lm = 0.0;
};

struct Hypothesis {
  std::vector<TokenId> tokens;  // sos first; eos last once finished
  double score = 0.0;
  ScoreBreakdown breakdown;
  std::vector<CtcPrefixState> ctc_states;
  bool finished = false;

  int num_labels() const;
};

// A scored one-token extension of a hypothesis.
struct Extension {
  TokenId token = -1;
  double step_score = 0.0;  // weighted fusion score plus weighted LM score
  ScorePairs step_scores;   // unweighted {attention, ctc} increments
  double step_lm = 0.0;
  std::vector<CtcPrefixState> ctc_states;  // empty for eos
};

struct NBestEntry {
  std::vector<TokenId> labels;  // without sos and eos
  double score = 0.0;
  ScoreBreakdown breakdown;
};

struct DecodeResult {
  std::vector<NBestEntry> n_best;  // best first

  const NBestEntry& best() const { return n_best.front(); }
};

// Orders (score, tokens) pairs: higher score first, then the
// lexicographically smaller sequence, which puts lower ids and shorter
// sequences first.
bool BetterHypothesis(double score_a, std::span<const TokenId> tokens_a,
                      double score_b, std::span<const TokenId> tokens_b);

class EnsembleDecoder {
 public:
  // `lm` may be null; it must outlive the decoder. Throws ConfigError on
  // weight or config violations and std::invalid_argument on shape
  // mismatches.
  EnsembleDecoder(std::vector<ModelInputs> models, Vocabulary vocab,
                  const NGramLm* lm, FusionWeights weights, DecodeConfig cfg);

  int num_models() const { return static_cast<int>(models_.size()); }
  int max_length() const { return max_length_; }
  const Vocabulary& vocab() const { return vocab_; }

  Hypothesis Initial() const;

  // Scores the pre-beam candidates of a running hypothesis. Only eos is
  // offered once the hypothesis holds max_length() labels; eos is withheld
  // below minlen.
  std::vector<Extension> Expand(const Hypothesis& hyp) const;

  Hypothesis Advance(const Hypothesis& hyp, const Extension& ext) const;

  DecodeResult Search() const;

 private:
  std::vector<ModelInputs> models_;
  Vocabulary vocab_;
  const NGramLm* lm_;
  FusionWeights weights_;
  DecodeConfig cfg_;
  int max_length_ = 1;
};

DecodeResult EnsembleBeamSearch(std::vector<ModelInputs> models,
                                const Vocabulary& vocab, const NGramLm* lm,
                                const FusionWeights& weights,
                                const DecodeConfig& cfg);

}  // namespace fusebeam

#endif  // FUSEBEAM_DECODE_BEAM_SEARCH_H_
