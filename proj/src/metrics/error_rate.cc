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

#include "fusebeam/metrics/error_rate.h"

#include <cctype>
#include <stdexcept>

#include "fusebeam/error.h"

namespace fusebeam {

std::string ErrorUnitName(ErrorUnit unit) {
  return unit == ErrorUnit::kWord ? "word" : "char";
}

ErrorUnit ParseErrorUnit(const std::string& name) {
  if (name == "word") return ErrorUnit::kWord;
  if (name == "char") return ErrorUnit::kChar;
  throw ConfigError("unit must be word or char, got " + name);
}

namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte; keep it as its own symbol
}

}  // namespace

std::vector<std::string> TokenizeForScoring(std::string_view text, ErrorUnit unit,
                                            const TextNormalization& norm) {
  std::string clean;
  clean.reserve(text.size());
  for (char c : text) {
    clean.push_back(norm.lowercase && static_cast<unsigned char>(c) < 0x80
                        ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                        : c);
  }
  std::vector<std::string> tokens;
  if (unit == ErrorUnit::kWord) {
    std::size_t i = 0;
    while (i < clean.size()) {
      while (i < clean.size() && IsSpace(clean[i])) ++i;
      std::size_t j = i;
      while (j < clean.size() && !IsSpace(clean[j])) ++j;
      if (j > i) tokens.emplace_back(clean.substr(i, j - i));
      i = j;
    }
    return tokens;
  }
  // Characters: collapse whitespace runs to one space, trim the ends.
  std::string collapsed;
  for (char c : clean) {
    if (IsSpace(c)) {
      if (!collapsed.empty() && collapsed.back() != ' ') collapsed.push_back(' ');
    } else {
      collapsed.push_back(c);
    }
  }
  if (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
  for (std::size_t i = 0; i < collapsed.size();) {
    const std::size_t len =
        std::min(Utf8Length(static_cast<unsigned char>(collapsed[i])), collapsed.size() - i);
    if (!(norm.drop_whitespace_for_chars && collapsed[i] == ' ')) {
      tokens.emplace_back(collapsed.substr(i, len));
    }
    i += len;
  }
  return tokens;
}

double ErrorReport::Percent() const {
  return 100.0 * static_cast<double>(ops.Errors()) / static_cast<double>(reference_tokens);
}

ErrorReport ComputeErrorRate(std::span<const std::string> refs,
                             std::span<const std::string> hyps, ErrorUnit unit,
                             const TextNormalization& norm) {
  if (refs.size() != hyps.size()) {
    throw std::invalid_argument("reference and hypothesis counts differ");
  }
  ErrorReport report;
  report.unit = unit;
  for (std::size_t u = 0; u < refs.size(); ++u) {
    const auto r = TokenizeForScoring(refs[u], unit, norm);
    const auto h = TokenizeForScoring(hyps[u], unit, norm);
    report.ops += EditDistance(r, h);
    report.reference_tokens += static_cast<long>(r.size());
  }
  if (report.reference_tokens == 0) {
    throw std::invalid_argument("error rate is undefined for an empty reference corpus");
  }
  return report;
}

}  // namespace fusebeam
