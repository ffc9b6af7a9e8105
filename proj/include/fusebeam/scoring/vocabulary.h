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

#ifndef FUSEBEAM_SCORING_VOCABULARY_H_
#define FUSEBEAM_SCORING_VOCABULARY_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fusebeam {

using TokenId = int;

// Output token inventory shared by every scorer of an ensemble. sos and eos
// may share an id; blank must be distinct from both.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, TokenId blank_id, TokenId sos_id,
             TokenId eos_id);

  int size() const { return static_cast<int>(tokens_.size()); }
  TokenId blank_id() const { return blank_id_; }
  TokenId sos_id() const { return sos_id_; }
  TokenId eos_id() const { return eos_id_; }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<TokenId> Find(std::string_view token) const;

  // Ordinary output symbols: neither blank, sos nor eos.
  bool IsLabel(TokenId id) const;
  // Tokens a hypothesis may be extended with: labels and eos, ascending.
  const std::vector<TokenId>& Candidates() const { return candidates_; }

  // With a "<space>" token the vocabulary is character level: references are
  // split into characters and spaces map to <space>. Otherwise references are
  // split on whitespace. Throws std::invalid_argument on unknown tokens.
  std::vector<TokenId> Encode(std::string_view text) const;
  // Inverse of Encode for label sequences.
  std::string Decode(std::span<const TokenId> labels) const;

  bool operator==(const Vocabulary& o) const {
    return tokens_ == o.tokens_ && blank_id_ == o.blank_id_ &&
           sos_id_ == o.sos_id_ && eos_id_ == o.eos_id_;
  }

 private:
  std::vector<std::string> tokens_;
  TokenId blank_id_ = 0, sos_id_ = 1, eos_id_ = 1;
  std::unordered_map<std::string, TokenId> index_;
  std::vector<TokenId> candidates_;
};

}  // namespace fusebeam

#endif  // FUSEBEAM_SCORING_VOCABULARY_H_
