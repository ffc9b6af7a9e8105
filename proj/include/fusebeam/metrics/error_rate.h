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

#ifndef FUSEBEAM_METRICS_ERROR_RATE_H_
#define FUSEBEAM_METRICS_ERROR_RATE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fusebeam/metrics/edit_distance.h"

namespace fusebeam {

enum class ErrorUnit { kWord, kChar };

std::string ErrorUnitName(ErrorUnit unit);
ErrorUnit ParseErrorUnit(const std::string& name);

struct TextNormalization {
  bool lowercase = true;
  // Character scoring drops whitespace (Mandarin-style CER).
  bool drop_whitespace_for_chars = true;
};

// Words split on whitespace, or UTF-8 code points for kChar.
std::vector<std::string> TokenizeForScoring(std::string_view text, ErrorUnit unit,
                                            const TextNormalization& norm = {});

struct ErrorReport {
  ErrorUnit unit = ErrorUnit::kWord;
  EditOps ops;
  long reference_tokens = 0;

  // 100 * (S + D + I) / N.
  double Percent() const;
};

// Pooled over the corpus. Throws std::invalid_argument when the list sizes
// differ or the references contain no tokens.
ErrorReport ComputeErrorRate(std::span<const std::string> refs,
                             std::span<const std::string> hyps, ErrorUnit unit,
                             const TextNormalization& norm = {});

inline double ErrorRatePercent(std::span<const std::string> refs,
                               std::span<const std::string> hyps,
                               ErrorUnit unit) {
  return ComputeErrorRate(refs, hyps, unit).Percent();
}

}  // namespace fusebeam

#endif  // FUSEBEAM_METRICS_ERROR_RATE_H_
