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

#ifndef FUSEBEAM_DIVERSITY_TEACHER_FORCING_H_
#define FUSEBEAM_DIVERSITY_TEACHER_FORCING_H_

#include <span>
#include <vector>

#include "fusebeam/decode/beam_search.h"
#include "fusebeam/scoring/vocabulary.h"

namespace fusebeam {

// Per-step weights of the attention and CTC scores.
struct ScorerMix {
  double attention = 0.7;
  double ctc = 0.3;
};

// Greedy prediction for every reference position, each conditioned on the
// ground-truth prefix. Candidates are the labels and eos; ties go to the
// lower id. Throws std::invalid_argument on an empty reference or on ids that
// are not labels.
std::vector<TokenId> TeacherForcedPredict(const ModelInputs& model,
                                          const Vocabulary& vocab,
                                          std::span<const TokenId> reference,
                                          ScorerMix mix = {});

}  // namespace fusebeam

#endif  // FUSEBEAM_DIVERSITY_TEACHER_FORCING_H_
