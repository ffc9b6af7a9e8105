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

#ifndef FUSEBEAM_DIVERSITY_OUTCOMES_H_
#define FUSEBEAM_DIVERSITY_OUTCOMES_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fusebeam/decode/corpus.h"
#include "fusebeam/diversity/teacher_forcing.h"

namespace fusebeam {

// Rows are reference token positions, columns are models; an entry is true
// when the model's teacher-forced prediction matches the reference token.
class TokenOutcomeMatrix {
 public:
  TokenOutcomeMatrix() = default;
  explicit TokenOutcomeMatrix(std::vector<std::string> model_names);

  int num_rows() const { return static_cast<int>(utterance_ids_.size()); }
  int num_models() const { return static_cast<int>(model_names_.size()); }
  const std::vector<std::string>& model_names() const { return model_names_; }
  const std::string& utterance_id(int row) const { return utterance_ids_.at(row); }
  int position(int row) const { return positions_.at(row); }
  bool correct(int row, int model) const;
  int CorrectCount(int row) const;

  // Throws std::invalid_argument unless `outcomes` has one entry per model.
  void AddRow(std::string utterance_id, int position, const std::vector<bool>& outcomes);

  // Header: utterance_id,position,<model names>; entries are 0/1.
  void WriteCsv(std::ostream& os) const;
  static TokenOutcomeMatrix ReadCsv(std::istream& is);

 private:
  std::vector<std::string> model_names_;
  std::vector<std::string> utterance_ids_;
  std::vector<int> positions_;
  std::vector<char> cells_;  // row-major
};

struct DifficultyHistogram {
  // buckets[k]: fraction of tokens predicted correctly by exactly k models.
  std::vector<double> buckets;
};

// All three throw std::invalid_argument on an empty matrix.
DifficultyHistogram DifficultyMeasure(const TokenOutcomeMatrix& m);

// gains[k]: fraction of tokens right under order[k] and wrong under every
// earlier model. Throws std::invalid_argument unless `order` is a permutation
// of the columns.
std::vector<double> IncrementalGain(const TokenOutcomeMatrix& m, std::span<const int> order);

// Fraction of tokens no model predicts.
double OracleErrorFloor(const TokenOutcomeMatrix& m);

struct OutcomeBuild {
  TokenOutcomeMatrix matrix;
  std::vector<std::pair<std::string, std::string>> failures;  // (id, error)
};

// Teacher-forced outcomes of every model on every reference token, in corpus
// order. Throws ConfigError when an utterance has no reference.
OutcomeBuild BuildOutcomeMatrix(std::span<const PreparedUtterance> corpus,
                                std::vector<std::string> model_names,
                                const Vocabulary& vocab, ScorerMix mix, int jobs);

// num_correct,fraction,percent
void WriteDifficultyCsv(std::ostream& os, const DifficultyHistogram& h);
// rank,model,gain_percent,cumulative_percent with 0.1% precision.
void WriteGainCsv(std::ostream& os, const TokenOutcomeMatrix& m, std::span<const int> order,
                  std::span<const double> gains);

}  // namespace fusebeam

#endif  // FUSEBEAM_DIVERSITY_OUTCOMES_H_
