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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fusebeam/error.h"
#include "fusebeam/log_math.h"
#include "fusebeam/scoring/attention.h"
#include "fusebeam/scoring/ctc.h"
#include "fusebeam/scoring/ngram_lm.h"
#include "fusebeam/scoring/toy_model.h"
#include "fusebeam/scoring/vocabulary.h"
#include "oracles.h"

namespace fusebeam {
namespace {

Vocabulary Abc() { return Vocabulary({"<blank>", "<sos/eos>", "a", "b", "c"}, 0, 1, 1); }

CtcPosteriorGrid Grid(RowMatrix m) { return CtcPosteriorGrid{std::move(m)}; }

double RowLse(const std::vector<double>& v) { return LogSumExp(std::span<const double>(v)); }

// ---- Vocabulary ----------------------------------------------------------

TEST(VocabularyTest, CandidatesAreLabelsPlusEos) {
  const Vocabulary v = Abc();
  EXPECT_EQ(v.Candidates(), (std::vector<TokenId>{1, 2, 3, 4}));
  EXPECT_FALSE(v.IsLabel(0));
  EXPECT_FALSE(v.IsLabel(1));
  EXPECT_TRUE(v.IsLabel(2));
}

TEST(VocabularyTest, RejectsInvalidSpecialIds) {
  EXPECT_THROW(Vocabulary({"<b>", "x"}, 0, 1, 1), std::invalid_argument);
  EXPECT_THROW(Vocabulary({"<b>", "<s>", "a"}, 0, 0, 1), std::invalid_argument);
  EXPECT_THROW(Vocabulary({"<b>", "<s>", "a"}, 0, 1, 3), std::invalid_argument);
  EXPECT_THROW(Vocabulary({"<b>", "<s>", "a", "a"}, 0, 1, 1), std::invalid_argument);
}

TEST(VocabularyTest, WordEncodingRoundTrip) {
  const Vocabulary v = Abc();
  EXPECT_EQ(v.Encode("  a c  b"), (std::vector<TokenId>{2, 4, 3}));
  EXPECT_EQ(v.Decode(std::vector<TokenId>{2, 4, 3}), "a c b");
  EXPECT_THROW(v.Encode("a d"), std::invalid_argument);
}

TEST(VocabularyTest, CharacterEncodingUsesSpaceToken) {
  const Vocabulary v({"<blank>", "<sos/eos>", "<space>", "a", "b"}, 0, 1, 1);
  EXPECT_EQ(v.Encode("ab  a"), (std::vector<TokenId>{3, 4, 2, 3}));
  EXPECT_EQ(v.Decode(std::vector<TokenId>{3, 4, 2, 3}), "ab a");
}

// ---- CTC -----------------------------------------------------------------

TEST(CtcTest, UniformTwoFrameSingleLabelIsThreeQuarters) {
  // Columns: blank, eos (never emitted), a.
  const double h = std::log(0.5);
  RowMatrix m(2, 3);
  m << h, kLogZero, h, h, kLogZero, h;
  const Vocabulary v({"<blank>", "<sos/eos>", "a"}, 0, 1, 1);
  const CtcPosteriorGrid grid = Grid(m);
  EXPECT_NEAR(std::exp(CtcSequenceLogProb(grid, std::vector<TokenId>{2}, 0)), 0.75, 1e-12);
  const CtcPrefixScorer scorer(grid, v);
  const std::vector<TokenId> sos = {1};
  const std::vector<TokenId> cands = {2};
  const auto ext = scorer.Extend(sos, scorer.InitialState(), cands);
  const std::vector<TokenId> prefix = {1, 2};
  const std::vector<TokenId> eos = {1};
  const auto end = scorer.Extend(prefix, ext[0].state, eos);
  EXPECT_NEAR(std::exp(ext[0].score + end[0].score), 0.75, 1e-12);
}

TEST(CtcTest, DeterministicGridHasSinglePath) {
  RowMatrix m(2, 3);
  m << kLogZero, kLogZero, 0.0, 0.0, kLogZero, kLogZero;
  const CtcPosteriorGrid grid = Grid(m);
  EXPECT_NEAR(CtcSequenceLogProb(grid, std::vector<TokenId>{2}, 0), 0.0, 1e-12);
  EXPECT_LE(CtcSequenceLogProb(grid, std::vector<TokenId>{}, 0), kLogZeroThreshold);
}

TEST(CtcTest, EmptyLabelOnAllBlankGridIsCertain) {
  RowMatrix m(3, 3);
  m.setConstant(kLogZero);
  m.col(0).setZero();
  EXPECT_DOUBLE_EQ(CtcSequenceLogProb(Grid(m), std::vector<TokenId>{}, 0), 0.0);
}

TEST(CtcTest, LabelLongerThanGridIsImpossible) {
  std::mt19937_64 rng(1);
  const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, 2, 5));
  EXPECT_LE(CtcSequenceLogProb(grid, std::vector<TokenId>{2, 3, 4}, 0), kLogZeroThreshold);
  // Repeats need a separating blank.
  EXPECT_LE(CtcSequenceLogProb(grid, std::vector<TokenId>{2, 2}, 0), kLogZeroThreshold);
}

TEST(CtcTest, ForwardMatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int frames = 1 + static_cast<int>(rng() % 6);
    const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, frames, 4));
    for (const auto& y : oracle::AllSequences({2, 3}, 4)) {
      const double want = oracle::EnumerateSequenceProb(grid.log_probs, y, 0);
      const double got = CtcSequenceLogProb(grid, y, 0);
      if (want == 0.0) {
        EXPECT_LE(got, kLogZeroThreshold);
      } else {
        EXPECT_NEAR(std::exp(got) / want, 1.0, 1e-9);
      }
    }
  }
}

TEST(CtcTest, IncrementalScoreOfAbMatchesForwardPass) {
  std::mt19937_64 rng(3);
  const Vocabulary v = Abc();
  const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, 5, 5));
  const CtcPrefixScorer scorer(grid, v);
  std::vector<TokenId> prefix = {1};
  CtcPrefixState state = scorer.InitialState();
  double total = 0.0;
  for (TokenId c : {2, 3}) {
    auto ext = scorer.Extend(prefix, state, std::vector<TokenId>{c});
    total += ext[0].score;
    state = std::move(ext[0].state);
    prefix.push_back(c);
  }
  total += scorer.Extend(prefix, state, std::vector<TokenId>{1})[0].score;
  const double want = oracle::ForwardSequenceProb(grid.log_probs, {2, 3}, 0);
  EXPECT_NEAR(total, std::log(want), 1e-9);
}

TEST(CtcTest, PrefixProbabilityMatchesEnumeration) {
  std::mt19937_64 rng(11);
  const Vocabulary v({"<blank>", "<sos/eos>", "a", "b"}, 0, 1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int frames = 1 + static_cast<int>(rng() % 6);
    const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, frames, 4));
    const CtcPrefixScorer scorer(grid, v);
    for (const auto& g : oracle::AllSequences({2, 3}, 3)) {
      if (g.empty()) continue;
      std::vector<TokenId> prefix = {1};
      prefix.insert(prefix.end(), g.begin(), g.end());
      const CtcPrefixState state = scorer.StateFor(prefix);
      const double want = oracle::EnumeratePrefixProb(grid.log_probs, g, 0);
      if (want == 0.0) {
        EXPECT_LE(state.prefix_logp, kLogZeroThreshold);
      } else {
        EXPECT_NEAR(std::exp(state.prefix_logp) / want, 1.0, 1e-9);
      }
    }
  }
}

TEST(CtcTest, ExtendingNeverIncreasesPrefixProbability) {
  std::mt19937_64 rng(5);
  const Vocabulary v = Abc();
  for (int trial = 0; trial < 50; ++trial) {
    const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, 6, 5));
    const CtcPrefixScorer scorer(grid, v);
    for (const auto& g : oracle::AllSequences({2, 3, 4}, 3)) {
      std::vector<TokenId> prefix = {1};
      prefix.insert(prefix.end(), g.begin(), g.end());
      const CtcPrefixState state = scorer.StateFor(prefix);
      for (const CtcExtension& e : scorer.Extend(prefix, state, v.Candidates())) {
        EXPECT_LE(e.prefix_logp, state.prefix_logp + 1e-12);
        EXPECT_LE(e.score, 1e-12);
      }
    }
  }
}

TEST(CtcTest, RecomputedStateEqualsCarriedState) {
  std::mt19937_64 rng(9);
  const Vocabulary v = Abc();
  const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, 6, 5));
  const CtcPrefixScorer scorer(grid, v);
  std::vector<TokenId> prefix = {1};
  CtcPrefixState carried = scorer.InitialState();
  for (TokenId c : {2, 2, 4, 3}) {
    carried = scorer.Extend(prefix, carried, std::vector<TokenId>{c})[0].state;
    prefix.push_back(c);
    const CtcPrefixState fresh = scorer.StateFor(prefix);
    ASSERT_EQ(fresh.r_blank.size(), carried.r_blank.size());
    for (std::size_t t = 0; t < fresh.r_blank.size(); ++t) {
      EXPECT_NEAR(fresh.r_blank[t], carried.r_blank[t], 1e-12);
      EXPECT_NEAR(fresh.r_nonblank[t], carried.r_nonblank[t], 1e-12);
    }
    EXPECT_NEAR(fresh.prefix_logp, carried.prefix_logp, 1e-12);
  }
}

TEST(CtcTest, RejectsBlankCandidateAndForeignState) {
  std::mt19937_64 rng(2);
  const Vocabulary v = Abc();
  const CtcPosteriorGrid grid = Grid(oracle::RandomLogGrid(rng, 4, 5));
  const CtcPrefixScorer scorer(grid, v);
  const std::vector<TokenId> sos = {1};
  EXPECT_THROW(scorer.Extend(sos, scorer.InitialState(), std::vector<TokenId>{0}),
               std::invalid_argument);
  const std::vector<TokenId> longer = {1, 2};
  EXPECT_THROW(scorer.Extend(longer, scorer.InitialState(), std::vector<TokenId>{3}),
               std::invalid_argument);
}

TEST(CtcTest, GridValidationChecksNormalization) {
  RowMatrix m = RowMatrix::Constant(2, 3, std::log(1.0 / 3.0));
  EXPECT_NO_THROW(Grid(m).Validate());
  m(1, 1) = 0.0;
  EXPECT_THROW(Grid(m).Validate(), std::invalid_argument);
}

// ---- Toy model -----------------------------------------------------------

FeatureMatrix Features(int frames, int dim, double value = 0.0) {
  FeatureMatrix f;
  f.data = RowMatrix::Constant(frames, dim, value);
  return f;
}

TEST(ToyModelTest, SubsamplesByFour) {
  const ToyModel m = ToyModel::Zeros(Abc(), 3, 2);
  EXPECT_EQ(ToyEncode(Features(8, 3), m).grid.num_frames(), 2);
  EXPECT_EQ(ToyEncode(Features(9, 3), m).grid.num_frames(), 3);
}

TEST(ToyModelTest, ZeroWeightsGiveUniformPosteriors) {
  const ToyModel m = ToyModel::Zeros(Abc(), 3, 2);
  std::mt19937_64 rng(1);
  FeatureMatrix f = Features(6, 3);
  f.data = RowMatrix::Random(6, 3);
  const EncoderOutput enc = ToyEncode(f, m);
  for (int t = 0; t < enc.grid.num_frames(); ++t) {
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(enc.grid.log_probs(t, k), -std::log(5.0), 1e-12);
  }
  const ToyAttentionScorer att(m, enc.encoded);
  for (double lp : att.LogProbs(std::vector<TokenId>{1, 3})) EXPECT_NEAR(lp, -std::log(5.0), 1e-12);
}

TEST(ToyModelTest, OutputsAreLogDistributions) {
  std::mt19937_64 rng(4);
  ToyModel m = ToyModel::Zeros(Abc(), 4, 3);
  std::normal_distribution<double> g;
  for (RowMatrix* w : {&m.encoder, &m.encoder_bias, &m.embedding, &m.context, &m.output, &m.bias}) {
    for (Eigen::Index i = 0; i < w->size(); ++i) w->data()[i] = g(rng);
  }
  FeatureMatrix f = Features(10, 4);
  for (Eigen::Index i = 0; i < f.data.size(); ++i) f.data.data()[i] = g(rng);
  const EncoderOutput enc = ToyEncode(f, m);
  EXPECT_NO_THROW(enc.grid.Validate(1e-9));
  const ToyAttentionScorer att(m, enc.encoded);
  for (const std::vector<TokenId>& p : {std::vector<TokenId>{1}, std::vector<TokenId>{1, 2, 4}}) {
    EXPECT_NEAR(RowLse(att.LogProbs(p)), 0.0, 1e-9);
  }
  EXPECT_THROW(att.LogProbs(std::vector<TokenId>{1, 7}), std::invalid_argument);
}

TEST(ToyModelTest, HandSetWeightsMakeTokenDominate) {
  ToyModel m = ToyModel::Zeros(Abc(), 2, 2);
  // Embedding of sos is (1, 0); output row 0 strongly favours "a" (id 2).
  m.embedding(1, 0) = 1.0;
  m.output(0, 2) = 5.0;
  FeatureMatrix f = Features(4, 2, 0.3);
  const EncoderOutput enc = ToyEncode(f, m);
  const ToyAttentionScorer att(m, enc.encoded);
  const std::vector<double> lp = att.LogProbs(std::vector<TokenId>{1});
  EXPECT_EQ(std::max_element(lp.begin(), lp.end()) - lp.begin(), 2);
  // Direct arithmetic: logits are 5 for "a" and 0 elsewhere.
  EXPECT_NEAR(lp[2], 5.0 - std::log(std::exp(5.0) + 4.0), 1e-12);
}

TEST(ToyModelTest, JsonRoundTripAndShapeChecks) {
  std::mt19937_64 rng(8);
  ToyModel m = ToyModel::Zeros(Abc(), 3, 2);
  m.encoder(1, 2) = 0.25;
  m.bias(0, 3) = -1.5;
  const ToyModel back = ToyModel::FromJson(m.ToJson());
  EXPECT_EQ(back.vocab, m.vocab);
  EXPECT_EQ(back.encoder, m.encoder);
  EXPECT_EQ(back.bias, m.bias);

  nlohmann::json doc = m.ToJson();
  doc["matrices"]["output"]["shape"] = {3, 5};
  EXPECT_THROW(ToyModel::FromJson(doc), FormatError);
  EXPECT_THROW(ToyEncode(Features(4, 2), m), std::invalid_argument);
}

TEST(PositionalAttentionTest, ReadsRowByStep) {
  RowMatrix t(2, 3);
  t << std::log(0.2), std::log(0.3), std::log(0.5), std::log(0.6), std::log(0.3), std::log(0.1);
  const PositionalAttentionScorer s(t);
  EXPECT_DOUBLE_EQ(s.LogProbs(std::vector<TokenId>{1})[2], std::log(0.5));
  EXPECT_DOUBLE_EQ(s.LogProbs(std::vector<TokenId>{1, 2})[0], std::log(0.6));
  EXPECT_DOUBLE_EQ(s.LogProbs(std::vector<TokenId>{1, 2, 2, 2})[0], std::log(0.6));
}

// ---- N-gram LM -----------------------------------------------------------

constexpr char kUnigramArpa[] = R"(\data\
ngram 1=5

\1-grams:
-99 <s>
-0.6989700 </s>
-0.3979400 a
-0.6989700 b
-0.6989700 c

\end\
)";

// P(b | a) = 0.9 is listed; everything else backs off.
constexpr char kBigramArpa[] = R"(\data\
ngram 1=5
ngram 2=3

\1-grams:
-99 <s> -0.30103
-0.6989700 </s>
-0.3979400 a -0.9030900
-0.6989700 b
-0.6989700 c

\2-grams:
-0.0457575 a b
-0.30103 <s> a
-0.5228787 <s> b

\end\
)";

NGramLm Lm(const char* text) {
  std::istringstream is(text);
  return NGramLm::FromArpa(is, Abc());
}

TEST(NGramLmTest, UnigramIgnoresHistory) {
  const NGramLm lm = Lm(kUnigramArpa);
  EXPECT_EQ(lm.order(), 1);
  const auto a = lm.ScoreStep(std::vector<TokenId>{1});
  const auto b = lm.ScoreStep(std::vector<TokenId>{1, 2, 3});
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a[2], std::log(0.4), 1e-6);
  EXPECT_LE(a[0], kLogZeroThreshold);
}

TEST(NGramLmTest, BigramLookupAndNormalization) {
  const NGramLm lm = Lm(kBigramArpa);
  const Vocabulary vocab = Abc();
  const auto after_a = lm.ScoreStep(std::vector<TokenId>{1, 2});
  EXPECT_NEAR(after_a[3], std::log(0.9), 1e-6);
  for (const std::vector<TokenId>& p :
       {std::vector<TokenId>{1}, std::vector<TokenId>{1, 2}, std::vector<TokenId>{1, 3}}) {
    std::vector<double> v;
    for (TokenId c : vocab.Candidates()) v.push_back(lm.ScoreStep(p)[c]);
    EXPECT_NEAR(RowLse(v), 0.0, 1e-5);
  }
  EXPECT_LT(lm.MaxNormalizationError(), 1e-5);
  // Unseen bigram: backoff(a) + log p(c).
  EXPECT_NEAR(after_a[4], (-0.90309 - 0.69897) * std::log(10.0), 1e-9);
}

TEST(NGramLmTest, MalformedInputIsRejected) {
  std::istringstream missing_end("\\data\\\nngram 1=1\n\n\\1-grams:\n-1 a\n");
  EXPECT_THROW(NGramLm::FromArpa(missing_end, Abc()), FormatError);
  std::istringstream order4("\\data\\\nngram 4=1\n\\4-grams:\n-1 a a a a\n\\end\\\n");
  EXPECT_THROW(NGramLm::FromArpa(order4, Abc()), FormatError);
  std::istringstream bad_prob("\\data\\\nngram 1=1\n\\1-grams:\nx a\n\\end\\\n");
  EXPECT_THROW(NGramLm::FromArpa(bad_prob, Abc()), FormatError);
}

}  // namespace
}  // namespace fusebeam
