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

#include "fusebeam/scoring/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fusebeam/error.h"
#include "fusebeam/log_math.h"

namespace fusebeam {
namespace {

constexpr int kUnknownWord = -3;
constexpr int kSkipWord = -4;

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

NGramLm NGramLm::FromArpa(std::istream& is, const Vocabulary& vocab) {
  NGramLm lm;
  lm.vocab_ = vocab;
  for (TokenId id : vocab.Candidates()) lm.predictable_.push_back(id);

  auto map_word = [&](const std::string& w) -> int {
    if (w == "<s>") return kSentenceStart;
    if (w == "</s>") return vocab.eos_id();
    if (w == "<unk>") return kUnknownWord;
    const auto id = vocab.Find(w);
    if (!id || !vocab.IsLabel(*id)) return kSkipWord;
    return *id;
  };

  std::string line;
  int section = -1;  // 0 = \data\, n = \n-grams:
  bool saw_data = false, saw_end = false;
  int line_no = 0;
  const double ln10 = std::numbers::ln10;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty()) continue;
    if (t == "\\data\\") {
      section = 0;
      saw_data = true;
      continue;
    }
    if (t == "\\end\\") {
      saw_end = true;
      break;
    }
    if (t.front() == '\\') {
      int n = 0;
      if (std::sscanf(t.c_str(), "\\%d-grams:", &n) != 1 || n < 1) {
        throw FormatError("ARPA line " + std::to_string(line_no) + ": bad section header");
      }
      if (n > 3) throw FormatError("ARPA: only orders up to 3 are supported");
      section = n;
      lm.order_ = std::max(lm.order_, n);
      continue;
    }
    if (section == 0) {
      if (t.rfind("ngram ", 0) != 0) {
        throw FormatError("ARPA line " + std::to_string(line_no) + ": expected ngram count");
      }
      continue;
    }
    if (section < 1) throw FormatError("ARPA: content before \\data\\ section");
    std::istringstream fields(t);
    double logp10 = 0.0;
    if (!(fields >> logp10)) {
      throw FormatError("ARPA line " + std::to_string(line_no) + ": missing log-probability");
    }
    std::vector<std::string> words(section);
    for (auto& w : words) {
      if (!(fields >> w)) {
        throw FormatError("ARPA line " + std::to_string(line_no) + ": too few words");
      }
    }
    double backoff10 = 0.0;
    fields >> backoff10;
    Key key;
    bool skip = false;
    for (const auto& w : words) {
      const int id = map_word(w);
      if (id == kSkipWord) skip = true;
      key.push_back(id);
    }
    if (skip) continue;
    if (section == 1 && key[0] == kUnknownWord) {
      lm.has_unk_ = true;
      lm.unk_logp_ = logp10 * ln10;
      continue;
    }
    bool has_unk = false;
    for (int id : key) has_unk |= id == kUnknownWord;
    if (has_unk) continue;
    lm.entries_[key] = Entry{logp10 <= -99.0 ? kLogZero : logp10 * ln10, backoff10 * ln10};
  }
  if (!saw_data || !saw_end || lm.order_ == 0) {
    throw FormatError("ARPA: missing \\data\\, n-gram sections or \\end\\");
  }
  return lm;
}

NGramLm NGramLm::LoadArpa(const std::string& path, const Vocabulary& vocab) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  try {
    return FromArpa(is, vocab);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

const NGramLm::Entry* NGramLm::Find(const Key& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

double NGramLm::LogProb(std::span<const int> history, TokenId token) const {
  const int usable = std::min<int>(static_cast<int>(history.size()), order_ - 1);
  double backoff = 0.0;
  Key key;
  for (int n = usable; n >= 0; --n) {
    key.assign(history.end() - n, history.end());
    key.push_back(token);
    if (const Entry* e = Find(key)) return ClampLog(backoff + e->logp);
    if (n > 0) {
      key.pop_back();
      if (const Entry* ctx = Find(key)) backoff += ctx->backoff;
    }
  }
  return has_unk_ ? ClampLog(backoff + unk_logp_) : kLogZero;
}

std::vector<int> NGramLm::HistoryOf(std::span<const TokenId> prefix) const {
  if (prefix.empty() || prefix.front() != vocab_.sos_id()) {
    throw std::invalid_argument("prefix must start with sos");
  }
  std::vector<int> history(prefix.begin(), prefix.end());
  history[0] = kSentenceStart;
  return history;
}

std::vector<double> NGramLm::ScoreStep(std::span<const TokenId> prefix) const {
  const std::vector<int> history = HistoryOf(prefix);
  std::vector<double> out(vocab_.size(), kLogZero);
  for (TokenId id : predictable_) out[id] = LogProb(history, id);
  return out;
}

double NGramLm::MaxNormalizationError() const {
  std::vector<Key> contexts = {Key{}};
  for (const auto& [key, entry] : entries_) {
    if (static_cast<int>(key.size()) < order_ && key.back() != vocab_.eos_id()) {
      contexts.push_back(key);
    }
  }
  double worst = 0.0;
  std::vector<double> scores(predictable_.size());
  for (const Key& ctx : contexts) {
    for (std::size_t i = 0; i < predictable_.size(); ++i) {
      scores[i] = LogProb(ctx, predictable_[i]);
    }
    worst = std::max(worst, std::abs(LogSumExp(scores)));
  }
  return worst;
}

}  // namespace fusebeam
