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

#ifndef FUSEBEAM_TOOLS_TOY_CORPUS_H_
#define FUSEBEAM_TOOLS_TOY_CORPUS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fusebeam/frontend/audio.h"
#include "fusebeam/frontend/frontend.h"
#include "fusebeam/frontend/normalization.h"
#include "fusebeam/scoring/toy_model.h"

namespace fusebeam::cli {

// Word-level vocabulary of four tone words; blank 0, shared sos/eos 1.
Vocabulary ToyVocabulary();

struct ToyUtterance {
  std::string id;
  std::vector<TokenId> labels;
  AudioBuffer audio;
  // Half-open sample ranges of each word.
  std::vector<std::pair<int, int>> segments;
};

// One utterance of 1..4 tone words separated by short pauses over white noise.
ToyUtterance SynthesizeToyUtterance(const std::string& id, std::uint64_t seed,
                                    double noise_std = 0.01);

struct TrainedToyModel {
  ToyModel model;
  NormalizationStats stats;
};

// Fits the encoder by softmax regression on frame labels derived from the
// word segments; the decoder reproduces a smoothed bigram of the transcripts.
TrainedToyModel TrainToyModel(const std::vector<ToyUtterance>& train, const FrontendConfig& fe,
                              int subsample_factor = 4, int iterations = 200);

// Katz bigram in ARPA format over the training transcripts.
std::string ToyBigramArpa(const std::vector<ToyUtterance>& train, const Vocabulary& vocab);

struct ToyCorpusOptions {
  std::string out_dir;
  int train_utterances = 40;
  int test_utterances = 8;
  std::uint64_t seed = 0;
  std::vector<Frontend> frontends = {Frontend::kMel, Frontend::kModgd, Frontend::kGamma,
                                     Frontend::kCqt};
};

// Writes wav/, train.tsv, test.tsv, models/, lm.arpa and config.json.
void MakeToyCorpus(const ToyCorpusOptions& opts, std::ostream& log);

}  // namespace fusebeam::cli

#endif  // FUSEBEAM_TOOLS_TOY_CORPUS_H_
