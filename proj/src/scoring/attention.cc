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

#include "fusebeam/scoring/attention.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fusebeam {

PositionalAttentionScorer::PositionalAttentionScorer(RowMatrix log_probs)
    : log_probs_(std::move(log_probs)) {
  if (log_probs_.rows() < 1 || log_probs_.cols() < 1) {
    throw std::invalid_argument("positional scorer needs a non-empty table");
  }
}

std::vector<double> PositionalAttentionScorer::LogProbs(
    std::span<const TokenId> prefix) const {
  if (prefix.empty()) throw std::invalid_argument("prefix must start with sos");
  const Eigen::Index row =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(prefix.size()) - 1,
                             log_probs_.rows() - 1);
  return std::vector<double>(log_probs_.row(row).begin(), log_probs_.row(row).end());
}

}  // namespace fusebeam
