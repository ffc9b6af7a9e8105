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

#ifndef FUSEBEAM_METRICS_EDIT_DISTANCE_H_
#define FUSEBEAM_METRICS_EDIT_DISTANCE_H_

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace fusebeam {

struct EditOps {
  long hits = 0;
  long substitutions = 0;
  long insertions = 0;
  long deletions = 0;

  long Errors() const { return substitutions + insertions + deletions; }

  EditOps& operator+=(const EditOps& o) {
    hits += o.hits;
    substitutions += o.substitutions;
    insertions += o.insertions;
    deletions += o.deletions;
    return *this;
  }
  bool operator==(const EditOps&) const = default;
};

// Unit-cost Levenshtein alignment of hyp against ref. Among minimal
// alignments the traceback prefers the diagonal (hit or substitution), then
// deletion, then insertion, so the op counts are deterministic.
template <typename T>
EditOps EditDistance(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<long> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> long& { return cost[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<long>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<long>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const long diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  EditOps ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (same) ++ops.hits; else ++ops.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++ops.deletions;
      --i;
    } else {
      ++ops.insertions;
      --j;
    }
  }
  return ops;
}

inline EditOps EditDistance(const std::vector<std::string>& ref,
                            const std::vector<std::string>& hyp) {
  return EditDistance<std::string>(std::span<const std::string>(ref),
                                   std::span<const std::string>(hyp));
}

}  // namespace fusebeam

#endif  // FUSEBEAM_METRICS_EDIT_DISTANCE_H_
