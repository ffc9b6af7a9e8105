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

#include "fusebeam/scoring/vocabulary.h"

#include <cctype>
#include <stdexcept>

namespace fusebeam {

namespace {
constexpr std::string_view kSpaceToken = "<space>";
}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, TokenId blank_id,
                       TokenId sos_id, TokenId eos_id)
    : tokens_(std::move(tokens)),
      blank_id_(blank_id),
      sos_id_(sos_id),
      eos_id_(eos_id) {
  const int n = size();
  if (n < 3) throw std::invalid_argument("vocabulary needs at least 3 tokens");
  for (TokenId id : {blank_id_, sos_id_, eos_id_}) {
    if (id < 0 || id >= n) throw std::invalid_argument("special token id out of range");
  }
  if (blank_id_ == sos_id_ || blank_id_ == eos_id_) {
    throw std::invalid_argument("blank must differ from sos and eos");
  }
  for (TokenId id = 0; id < n; ++id) {
    if (!index_.emplace(tokens_[id], id).second) {
      throw std::invalid_argument("duplicate token: " + tokens_[id]);
    }
  }
  for (TokenId id = 0; id < n; ++id) {
    if (IsLabel(id) || id == eos_id_) candidates_.push_back(id);
  }
  if (candidates_.size() < 2) throw std::invalid_argument("vocabulary has no label tokens");
}

std::optional<TokenId> Vocabulary::Find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::IsLabel(TokenId id) const {
  return id >= 0 && id < size() && id != blank_id_ && id != sos_id_ &&
         id != eos_id_;
}

std::vector<TokenId> Vocabulary::Encode(std::string_view text) const {
  auto lookup = [&](std::string_view piece) {
    const auto id = Find(piece);
    if (!id || !IsLabel(*id)) {
      throw std::invalid_argument("token not in vocabulary: " + std::string(piece));
    }
    return *id;
  };
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::vector<TokenId> ids;
  const auto space = Find(kSpaceToken);
  if (space) {
    bool pending_space = false;
    for (std::size_t i = 0; i < text.size();) {
      if (is_space(text[i])) {
        pending_space = !ids.empty();
        ++i;
        continue;
      }
      if (pending_space) ids.push_back(*space);
      pending_space = false;
      const auto lead = static_cast<unsigned char>(text[i]);
      std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : 4;
      len = std::min(len, text.size() - i);
      ids.push_back(lookup(text.substr(i, len)));
      i += len;
    }
    return ids;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) ids.push_back(lookup(text.substr(i, j - i)));
    i = j;
  }
  return ids;
}

std::string Vocabulary::Decode(std::span<const TokenId> labels) const {
  const auto space = Find(kSpaceToken);
  std::string text;
  for (TokenId id : labels) {
    if (space) {
      text += id == *space ? std::string(" ") : token(id);
    } else {
      if (!text.empty()) text.push_back(' ');
      text += token(id);
    }
  }
  return text;
}

}  // namespace fusebeam
