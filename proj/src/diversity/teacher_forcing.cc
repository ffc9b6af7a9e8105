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

#include "fusebeam/diversity/teacher_forcing.h"

#include <stdexcept>

#include "fusebeam/scoring/ctc.h"

namespace fusebeam {

std::vector<TokenId> TeacherForcedPredict(const ModelInputs& model,
                                          const Vocabulary& vocab,
                                          std::span<const TokenId> reference,
                                          ScorerMix mix) {
  if (reference.empty()) throw std::invalid_argument("teacher forcing: empty reference");
  for (TokenId t : reference) {
    if (t < 0 || t >= vocab.size() || !vocab.IsLabel(t)) {
      throw std::invalid_argument("teacher forcing: reference token " + std::to_string(t) +
                                  " is not in the label set");
    }
  }
  if (!model.attention) throw std::invalid_argument("teacher forcing: no attention scorer");

  const CtcPrefixScorer ctc(model.ctc, vocab);
  const std::vector<TokenId>& candidates = vocab.Candidates();
  std::vector<TokenId> prefix = {vocab.sos_id()};
  CtcPrefixState state = ctc.InitialState();
  std::vector<TokenId> predicted;
  predicted.reserve(reference.size());

  for (TokenId truth : reference) {
    const std::vector<double> att = model.attention->LogProbs(prefix);
    std::vector<CtcExtension> ext = ctc.Extend(prefix, state, candidates);
    TokenId best = -1;
    double best_score = 0.0;
    std::size_t truth_index = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const TokenId c = candidates[k];
      const double score = mix.ctc * ext[k].score + mix.attention * att[c];
      if (best < 0 || score > best_score) {
        best = c;
        best_score = score;
      }
      if (c == truth) truth_index = k;
    }
    predicted.push_back(best);
    prefix.push_back(truth);
    state = std::move(ext[truth_index].state);
  }
  return predicted;
}

}  // namespace fusebeam
