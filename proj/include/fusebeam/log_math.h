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

#ifndef FUSEBEAM_LOG_MATH_H_
#define FUSEBEAM_LOG_MATH_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace fusebeam {

// Stand-in for log(0). Keeps sums and differences finite.
inline constexpr double kLogZero = -1e30;

// Anything at or below this is treated as an impossible event.
inline constexpr double kLogZeroThreshold = -1e29;

inline bool IsLogZero(double x) { return x <= kLogZeroThreshold; }

inline double ClampLog(double x) { return x < kLogZero ? kLogZero : x; }

inline double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (IsLogZero(b)) return ClampLog(a);
  return a + std::log1p(std::exp(b - a));
}

inline double LogSumExp(std::span<const double> values) {
  double max_value = kLogZero;
  for (double v : values) max_value = std::max(max_value, v);
  if (IsLogZero(max_value)) return kLogZero;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max_value);
  return max_value + std::log(sum);
}

// log-softmax of a logit vector.
inline std::vector<double> LogSoftmax(std::span<const double> logits) {
  const double norm = LogSumExp(logits);
  std::vector<double> out(logits.begin(), logits.end());
  for (double& v : out) v -= norm;
  return out;
}

}  // namespace fusebeam

#endif  // FUSEBEAM_LOG_MATH_H_
