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

#ifndef FUSEBEAM_SCORING_NGRAM_LM_H_
#define FUSEBEAM_SCORING_NGRAM_LM_H_

#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fusebeam/scoring/vocabulary.h"

namespace fusebeam {

// Back-off n-gram LM (order <= 3) read from ARPA text, bound to a decoding
// vocabulary. "<s>" maps to the sentence-start context, "</s>" to eos and
// "<unk>" covers labels the LM does not list. Probabilities are kept in
// natural log.
class NGramLm {
 public:
  static NGramLm FromArpa(std::istream& is, const Vocabulary& vocab);
  static NGramLm LoadArpa(const std::string& path, const Vocabulary& vocab);

  int order() const { return order_; }

  // log p(token | history) for every vocabulary entry given a prefix that
  // starts with sos. Blank (and sos when distinct from eos) get kLogZero.
  std::vector<double> ScoreStep(std::span<const TokenId> prefix) const;

  // Katz back-off lookup. The history holds LM-internal ids (see
  // kSentenceStart), most recent last.
  double LogProb(std::span<const int> history, TokenId token) const;

  // Largest |log sum_w p(w | h)| over the contexts stored in the model.
  double MaxNormalizationError() const;

  // History id standing for "<s>".
  static constexpr int kSentenceStart = -2;

 private:
  struct Entry {
    double logp = 0.0;
    double backoff = 0.0;
  };
  using Key = std::vector<int>;

  std::vector<int> HistoryOf(std::span<const TokenId> prefix) const;
  const Entry* Find(const Key& key) const;

  int order_ = 0;
  Vocabulary vocab_;
  std::vector<TokenId> predictable_;  // labels and eos
  std::map<Key, Entry> entries_;
  bool has_unk_ = false;
  double unk_logp_ = 0.0;
};

}  // namespace fusebeam

#endif  // FUSEBEAM_SCORING_NGRAM_LM_H_
