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

#include <random>

#include <gtest/gtest.h>

#include "fusebeam/error.h"
#include "fusebeam/metrics/edit_distance.h"
#include "fusebeam/metrics/error_rate.h"
#include "fusebeam/metrics/parameter_set.h"
#include "oracles.h"

namespace fusebeam {
namespace {

std::vector<int> RandomSeq(std::mt19937_64& rng, int max_len, int symbols) {
  std::vector<int> s(rng() % (max_len + 1));
  for (int& x : s) x = static_cast<int>(rng() % symbols);
  return s;
}

EditOps Ops(const std::vector<int>& a, const std::vector<int>& b) {
  return EditDistance<int>(std::span<const int>(a), std::span<const int>(b));
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(Ops({1, 2, 3}, {1, 2, 3}), (EditOps{3, 0, 0, 0}));
  const EditOps del = EditDistance({"a", "b"}, {"a"});
  EXPECT_EQ(del.deletions, 1);
  EXPECT_EQ(del.Errors(), 1);
  const EditOps ins = EditDistance({"a"}, {"a", "b"});
  EXPECT_EQ(ins.insertions, 1);
  EXPECT_EQ(Ops({}, {}).Errors(), 0);
}

TEST(EditDistanceTest, MatchesNaiveRecursionAndAccounting) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto a = RandomSeq(rng, 6, 3), b = RandomSeq(rng, 6, 3);
    const EditOps ops = Ops(a, b);
    EXPECT_EQ(ops.Errors(), oracle::NaiveEditDistance(a, b));
    EXPECT_EQ(ops.hits + ops.substitutions + ops.deletions, static_cast<long>(a.size()));
    EXPECT_EQ(ops.hits + ops.substitutions + ops.insertions, static_cast<long>(b.size()));
    EXPECT_EQ(ops.Errors(), Ops(b, a).Errors());
  }
}

TEST(EditDistanceTest, TriangleInequality) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = RandomSeq(rng, 6, 3), b = RandomSeq(rng, 6, 3), c = RandomSeq(rng, 6, 3);
    EXPECT_LE(Ops(a, c).Errors(), Ops(a, b).Errors() + Ops(b, c).Errors());
  }
}

TEST(EditDistanceTest, TiesPreferSubstitution) {
  const EditOps ops = Ops({1, 2}, {3});
  EXPECT_EQ(ops.substitutions, 1);
  EXPECT_EQ(ops.deletions, 1);
}

TEST(ErrorRateTest, Examples) {
  const std::vector<std::string> refs = {"hello world"}, hyps = {"hello word"};
  EXPECT_DOUBLE_EQ(ErrorRatePercent(refs, hyps, ErrorUnit::kWord), 50.0);
  EXPECT_DOUBLE_EQ(ErrorRatePercent(refs, refs, ErrorUnit::kWord), 0.0);
  const std::vector<std::string> r2 = {"ab"}, h2 = {"ac"};
  EXPECT_DOUBLE_EQ(ErrorRatePercent(r2, h2, ErrorUnit::kChar), 50.0);
}

TEST(ErrorRateTest, PooledDiffersFromPerUtteranceMean) {
  // u1: 1 error over 1 word (100%); u2: 0 errors over 4 words (0%).
  // Pooled: 1/5 = 20%; the per-utterance mean would be 50%.
  const std::vector<std::string> refs = {"a", "a b c d"}, hyps = {"x", "a b c d"};
  EXPECT_DOUBLE_EQ(ErrorRatePercent(refs, hyps, ErrorUnit::kWord), 20.0);
}

TEST(ErrorRateTest, InvariantUnderCorpusDuplication) {
  std::mt19937_64 rng(9);
  const char* words[] = {"do", "re", "mi"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> refs, hyps;
    for (int u = 0; u < 4; ++u) {
      std::string r, h;
      for (int k = 0, n = 1 + static_cast<int>(rng() % 4); k < n; ++k) {
        r += std::string(k ? " " : "") + words[rng() % 3];
      }
      for (int k = 0, n = static_cast<int>(rng() % 4); k < n; ++k) {
        h += std::string(k ? " " : "") + words[rng() % 3];
      }
      refs.push_back(r);
      hyps.push_back(h);
    }
    const double once = ErrorRatePercent(refs, hyps, ErrorUnit::kWord);
    refs.insert(refs.end(), refs.begin(), refs.end());
    hyps.insert(hyps.end(), hyps.begin(), hyps.end());
    EXPECT_NEAR(ErrorRatePercent(refs, hyps, ErrorUnit::kWord), once, 1e-12);
  }
}

TEST(ErrorRateTest, NormalizationAndErrors) {
  const std::vector<std::string> refs = {"Hello  World"}, hyps = {"hello world"};
  EXPECT_DOUBLE_EQ(ErrorRatePercent(refs, hyps, ErrorUnit::kWord), 0.0);
  EXPECT_EQ(TokenizeForScoring("a b", ErrorUnit::kChar), (std::vector<std::string>{"a", "b"}));
  const std::vector<std::string> empty;
  EXPECT_THROW(ComputeErrorRate(empty, empty, ErrorUnit::kWord), std::invalid_argument);
  const std::vector<std::string> one = {"a"};
  EXPECT_THROW(ComputeErrorRate(one, empty, ErrorUnit::kWord), std::invalid_argument);
  EXPECT_THROW(ParseErrorUnit("phone"), ConfigError);
  EXPECT_EQ(ParseErrorUnit("char"), ErrorUnit::kChar);
}

ParameterSet RandomSet(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ParameterSet p;
  p["enc.w"] = Tensor{{2, 3}, std::vector<double>(6)};
  p["dec.b"] = Tensor{{4}, std::vector<double>(4)};
  for (auto& [name, t] : p) {
    for (double& v : t.values) v = n(rng);
  }
  return p;
}

TEST(CheckpointAverageTest, Examples) {
  std::mt19937_64 rng(10);
  const ParameterSet x = RandomSet(rng);
  EXPECT_EQ(AverageCheckpoints(std::vector<ParameterSet>{x}), x);
  ParameterSet neg = x;
  for (auto& [name, t] : neg) {
    for (double& v : t.values) v = -v;
  }
  for (const auto& [name, t] : AverageCheckpoints(std::vector<ParameterSet>{x, neg})) {
    for (double v : t.values) EXPECT_EQ(v, 0.0);
  }
}

TEST(CheckpointAverageTest, MatchesElementwiseMeanAndIsOrderFree) {
  std::mt19937_64 rng(11);
  const std::vector<ParameterSet> sets = {RandomSet(rng), RandomSet(rng), RandomSet(rng)};
  const ParameterSet mean = AverageCheckpoints(sets);
  const ParameterSet reversed = AverageCheckpoints(std::vector<ParameterSet>{sets[2], sets[1], sets[0]});
  for (const auto& [name, t] : mean) {
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      double manual = 0.0;
      for (const auto& s : sets) manual += s.at(name).values[i];
      EXPECT_NEAR(t.values[i], manual / 3.0, 1e-12);
      EXPECT_NEAR(reversed.at(name).values[i], t.values[i], 1e-12);
    }
  }
  const ParameterSet same = AverageCheckpoints(std::vector<ParameterSet>{sets[0], sets[0]});
  for (const auto& [name, t] : same) {
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      EXPECT_NEAR(t.values[i], sets[0].at(name).values[i], 1e-15);
    }
  }
}

TEST(CheckpointAverageTest, RejectsMismatches) {
  std::mt19937_64 rng(12);
  const ParameterSet a = RandomSet(rng);
  ParameterSet b = a;
  b["enc.w"].shape = {3, 2};
  EXPECT_THROW(AverageCheckpoints(std::vector<ParameterSet>{a, b}), std::invalid_argument);
  ParameterSet c = a;
  c.erase("dec.b");
  c["dec.c"] = a.at("dec.b");
  EXPECT_THROW(AverageCheckpoints(std::vector<ParameterSet>{a, c}), std::invalid_argument);
  EXPECT_THROW(AverageCheckpoints(std::vector<ParameterSet>{}), std::invalid_argument);
}

TEST(CheckpointAverageTest, JsonRoundTrip) {
  std::mt19937_64 rng(13);
  const ParameterSet a = RandomSet(rng);
  EXPECT_EQ(ParameterSetFromJson(ParameterSetToJson(a)), a);
}

}  // namespace
}  // namespace fusebeam
