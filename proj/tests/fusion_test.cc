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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fusebeam/decode/beam_search.h"
#include "fusebeam/decode/corpus.h"
#include "fusebeam/decode/fusion.h"
#include "fusebeam/error.h"
#include "fusebeam/log_math.h"
#include "oracles.h"

namespace fusebeam {
namespace {

Vocabulary Abc() { return Vocabulary({"<blank>", "<sos/eos>", "a", "b", "c"}, 0, 1, 1); }

ModelInputs Inputs(RowMatrix ctc, RowMatrix att, int subsample = 4) {
  ModelInputs m;
  m.speech_frames = static_cast<int>(ctc.rows()) * subsample;
  m.ctc.log_probs = std::move(ctc);
  m.attention = std::make_shared<PositionalAttentionScorer>(std::move(att));
  return m;
}

ModelInputs RandomInputs(std::mt19937_64& rng, int frames, int n) {
  RowMatrix att = oracle::RandomLogGrid(rng, 4, n);
  att.col(0).setConstant(kLogZero);  // attention never proposes blank
  for (Eigen::Index r = 0; r < att.rows(); ++r) {
    const Eigen::RowVectorXd row = att.row(r);
    const double lse = LogSumExp(std::span<const double>(row.data(), row.size()));
    att.row(r).array() -= lse;
  }
  return Inputs(oracle::RandomLogGrid(rng, frames, n), att);
}

DecodeConfig Wide(int beam, double ratio = 1.0) {
  DecodeConfig cfg;
  cfg.beam_size = beam;
  cfg.pre_beam_size = beam;
  cfg.maxlen_ratio = ratio;
  return cfg;
}

// ---- Fusion arithmetic ---------------------------------------------------

TEST(FusionTest, JointScoreEndpointsAndFixedPoint) {
  EXPECT_EQ(JointScoreSingle(-1.25, -3.5, 0.0), -1.25);
  EXPECT_EQ(JointScoreSingle(-1.25, -3.5, 1.0), -3.5);
  EXPECT_NEAR(JointScoreSingle(std::log(0.5), std::log(0.5), 0.3), std::log(0.5), 1e-15);
}

TEST(FusionTest, CombinedScoreReducesToJointScoreBitwise) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30.0, 0.0), l(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double att = u(rng), ctc = u(rng), lambda = i % 2 ? 0.3 : l(rng);
    const FusionWeights w = FusionWeights::FromLambda(lambda);
    EXPECT_EQ(CombinedScore({{att, ctc}}, w), JointScoreSingle(att, ctc, lambda));
  }
}

TEST(FusionTest, CombinedScoreExamples) {
  FusionWeights one;
  one.alpha = {{1.0, 0.0}};
  EXPECT_EQ(CombinedScore({{-2.5, -9.0}}, one), -2.5);
  FusionWeights quarter;
  quarter.alpha = {{0.25, 0.25}, {0.25, 0.25}};
  EXPECT_DOUBLE_EQ(CombinedScore({{0.0, -1.0}, {-2.0, -3.0}}, quarter), -1.5);
  EXPECT_THROW(CombinedScore({{0.0, -1.0}}, quarter), std::invalid_argument);
}

TEST(FusionTest, WeightValidation) {
  FusionWeights w;
  EXPECT_THROW(w.Validate(), ConfigError);
  w.alpha = {{0.5, 0.4}};
  EXPECT_THROW(w.Validate(), ConfigError);
  w.alpha = {{1.1, -0.1}};
  EXPECT_THROW(w.Validate(), ConfigError);
  w.alpha = {{0.7, 0.3}};
  w.lm_weight = -1.0;
  EXPECT_THROW(w.Validate(), ConfigError);
  w.lm_weight = 1.2;
  EXPECT_NO_THROW(w.Validate());
}

TEST(FusionTest, UniformWeightsSplitPerModel) {
  const FusionWeights w = FusionWeights::Uniform(2);
  EXPECT_EQ(w.alpha, (ScorePairs{{0.35, 0.15}, {0.35, 0.15}}));
  EXPECT_NO_THROW(FusionWeights::Uniform(7).Validate());
}

TEST(FusionTest, ValidationWeightedFollowsInverseError) {
  const std::vector<double> errors = {2.0, 4.0};
  const FusionWeights w = FusionWeights::ValidationWeighted(errors);
  // Inverse errors 0.5 and 0.25 normalize to 2/3 and 1/3.
  EXPECT_NEAR(w.alpha[0][kAttention], 0.7 * 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w.alpha[1][kCtc], 0.3 / 3.0, 1e-15);
  EXPECT_NO_THROW(w.Validate());
  const std::vector<double> bad = {1.0, 0.0};
  EXPECT_THROW(FusionWeights::ValidationWeighted(bad), ConfigError);
}

TEST(FusionTest, LmWeightRule) {
  EXPECT_EQ(EnsembleLmWeight(1), 0.6);
  EXPECT_EQ(EnsembleLmWeight(2), 1.2);
  EXPECT_NEAR(EnsembleLmWeight(4), 2.4, 1e-15);
  EXPECT_THROW(EnsembleLmWeight(0), std::invalid_argument);
}

TEST(FusionTest, MaxOutputLengthRule) {
  const DecodeConfig cfg;
  EXPECT_EQ(MaxOutputLength(1000, cfg), 150);
  EXPECT_EQ(MaxOutputLength(4, cfg), 1);
  EXPECT_EQ(MaxOutputLength(400, cfg), 60);
  for (int frames = 1; frames < 3000; ++frames) {
    EXPECT_EQ(MaxOutputLength(frames, cfg), std::max(1, (6 * frames) / 40));
  }
}

TEST(FusionTest, DecodeConfigValidation) {
  DecodeConfig cfg;
  EXPECT_EQ(cfg.PreBeamSize(), 8);
  cfg.pre_beam_size = 3;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.pre_beam_size = 0;
  cfg.maxlen_ratio = 1.5;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.maxlen_ratio = 0.0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(PreBeamTest, FullWidthKeepsEveryCandidate) {
  const Vocabulary v = Abc();
  const std::vector<std::vector<double>> att = {{kLogZero, -1.0, -2.0, -0.5, -3.0}};
  const auto all = PreBeamSelect(att, FusionWeights::FromLambda(0.3), 4, v.Candidates());
  EXPECT_EQ(all, (std::vector<TokenId>{3, 1, 2, 4}));
  const auto clamped = PreBeamSelect(att, FusionWeights::FromLambda(0.3), 99, v.Candidates());
  EXPECT_EQ(clamped.size(), 4u);
}

TEST(PreBeamTest, SingleModelTopK) {
  const Vocabulary v = Abc();
  const std::vector<std::vector<double>> att = {{kLogZero, -1.0, -2.0, -0.5, -3.0}};
  EXPECT_EQ(PreBeamSelect(att, FusionWeights::FromLambda(0.3), 2, v.Candidates()),
            (std::vector<TokenId>{3, 1}));
}

TEST(PreBeamTest, EnsembleUsesAveragedRowsWithLowIdTies) {
  std::mt19937_64 rng(3);
  const Vocabulary v = Abc();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> att(2, std::vector<double>(5));
    std::uniform_int_distribution<int> level(-4, 0);
    for (auto& row : att) {
      for (double& x : row) x = level(rng);  // coarse values force ties
    }
    const int k = 1 + trial % 4;
    FusionWeights w;  // dyadic weights keep the weighted sums exact
    w.alpha = {{0.375, 0.125}, {0.375, 0.125}};
    const auto got = PreBeamSelect(att, w, k, v.Candidates());
    std::vector<std::pair<double, TokenId>> mean;
    for (TokenId c : v.Candidates()) mean.emplace_back(-(att[0][c] + att[1][c]) / 2.0, c);
    std::sort(mean.begin(), mean.end());
    std::vector<TokenId> want;
    for (int i = 0; i < k; ++i) want.push_back(mean[i].second);
    EXPECT_EQ(got, want);
  }
}

TEST(PreBeamTest, OppositePreferencesCancel) {
  const Vocabulary v = Abc();
  const std::vector<std::vector<double>> att = {{kLogZero, -9.0, -0.1, -5.0, -4.0},
                                                {kLogZero, -9.0, -5.0, -0.1, -4.0}};
  // Means: a -2.55, b -2.55, c -4.0, eos -9.0.
  EXPECT_EQ(PreBeamSelect(att, FusionWeights::Uniform(2), 3, v.Candidates()),
            (std::vector<TokenId>{2, 3, 4}));
}

// ---- Beam search ---------------------------------------------------------

// Single-model joint decoder written directly against JointScoreSingle.
struct RefHyp {
  std::vector<TokenId> tokens;
  double score = 0.0;
  CtcPrefixState state;
};

std::pair<std::vector<TokenId>, double> ReferenceSingleDecode(const ModelInputs& m,
                                                              const Vocabulary& v,
                                                              double lambda, int beam,
                                                              int max_len) {
  const CtcPrefixScorer ctc(m.ctc, v);
  std::vector<RefHyp> running = {{{v.sos_id()}, 0.0, ctc.InitialState()}};
  std::vector<RefHyp> done;
  while (!running.empty()) {
    std::vector<RefHyp> cands;
    for (const RefHyp& h : running) {
      const std::vector<double> att = m.attention->LogProbs(h.tokens);
      std::vector<TokenId> pool = v.Candidates();
      if (static_cast<int>(h.tokens.size()) - 1 >= max_len) pool = {v.eos_id()};
      std::sort(pool.begin(), pool.end(), [&](TokenId a, TokenId b) {
        return att[a] != att[b] ? att[a] > att[b] : a < b;
      });
      pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(beam)));
      const auto ext = ctc.Extend(h.tokens, h.state, pool);
      for (std::size_t k = 0; k < pool.size(); ++k) {
        RefHyp n{h.tokens, h.score + JointScoreSingle(att[pool[k]], ext[k].score, lambda),
                 ext[k].state};
        n.tokens.push_back(pool[k]);
        cands.push_back(std::move(n));
      }
    }
    std::sort(cands.begin(), cands.end(), [](const RefHyp& a, const RefHyp& b) {
      return a.score != b.score ? a.score > b.score : a.tokens < b.tokens;
    });
    cands.resize(std::min<std::size_t>(cands.size(), static_cast<std::size_t>(beam)));
    running.clear();
    for (RefHyp& c : cands) (c.tokens.back() == v.eos_id() ? done : running).push_back(c);
  }
  std::sort(done.begin(), done.end(), [](const RefHyp& a, const RefHyp& b) {
    return a.score != b.score ? a.score > b.score : a.tokens < b.tokens;
  });
  return {std::vector<TokenId>(done[0].tokens.begin() + 1, done[0].tokens.end() - 1),
          done[0].score};
}

TEST(BeamSearchTest, SingleModelMatchesReferenceJointDecoder) {
  std::mt19937_64 rng(21);
  const Vocabulary v = Abc();
  for (int trial = 0; trial < 100; ++trial) {
    const ModelInputs m = RandomInputs(rng, 3 + trial % 6, 5);
    DecodeConfig cfg;
    cfg.beam_size = 3;
    cfg.pre_beam_size = 3;
    const DecodeResult r = EnsembleBeamSearch({m}, v, nullptr, FusionWeights::FromLambda(0.3), cfg);
    const auto [labels, score] =
        ReferenceSingleDecode(m, v, 0.3, 3, MaxOutputLength(m.speech_frames, cfg));
    EXPECT_EQ(r.best().labels, labels);
    EXPECT_NEAR(r.best().score, score, 1e-9);
  }
}

TEST(BeamSearchTest, StepScoresReduceToJointScoreExactly) {
  std::mt19937_64 rng(5);
  const Vocabulary v = Abc();
  const ModelInputs m = RandomInputs(rng, 6, 5);
  const EnsembleDecoder dec({m}, v, nullptr, FusionWeights::FromLambda(0.3), Wide(4));
  Hypothesis h = dec.Initial();
  for (int step = 0; step < 3; ++step) {
    const auto exts = dec.Expand(h);
    for (const Extension& e : exts) {
      EXPECT_EQ(e.step_score, JointScoreSingle(e.step_scores[0][kAttention],
                                               e.step_scores[0][kCtc], 0.3));
    }
    const auto it = std::find_if(exts.begin(), exts.end(),
                                 [&](const Extension& e) { return e.token != v.eos_id(); });
    h = dec.Advance(h, *it);
  }
}

TEST(BeamSearchTest, UnprunedSearchMatchesBruteForce) {
  std::mt19937_64 rng(99);
  const Vocabulary v = Abc();
  std::istringstream arpa(R"(\data\
ngram 1=5
ngram 2=2

\1-grams:
-99 <s> -0.30103
-0.6989700 </s>
-0.3979400 a -0.9030900
-0.6989700 b
-0.6989700 c

\2-grams:
-0.0457575 a b
-0.30103 <s> a

\end\
)");
  const NGramLm lm = NGramLm::FromArpa(arpa, v);
  for (int trial = 0; trial < 150; ++trial) {
    const int models = 1 + trial % 2;
    const int frames = 1 + static_cast<int>(rng() % 6);
    std::vector<ModelInputs> in;
    for (int i = 0; i < models; ++i) in.push_back(RandomInputs(rng, frames, 5));
    FusionWeights w = FusionWeights::Uniform(models);
    w.lm_weight = trial % 3 == 0 ? 0.0 : 0.6 * models;
    // Ratio 0.6 keeps maxlen <= 3 on at most six frames; 4^3 + ... < 128.
    const DecodeConfig cfg = Wide(128, 0.6);
    const NGramLm* lm_ptr = w.lm_weight > 0 ? &lm : nullptr;
    const DecodeResult r = EnsembleBeamSearch(in, v, lm_ptr, w, cfg);
    const int max_len = MaxOutputLength(frames * 4, cfg);
    ASSERT_LE(max_len, 3);
    const auto best = oracle::BruteForceDecode(in, v, lm_ptr, w, max_len);
    EXPECT_EQ(r.best().labels, best.labels);
    EXPECT_NEAR(r.best().score, best.score, 1e-9);
  }
}

TEST(BeamSearchTest, ComplementaryModelsDecodeWhatNeitherDoesAlone) {
  const Vocabulary v = Abc();
  const double lo = std::log(0.01);
  // Frames: token, blank, token, blank. Model A is sure of "a" but leans
  // to "c" second; model B is sure of "b" but leans to "c" first.
  RowMatrix a(4, 5), b(4, 5);
  a << lo, lo, std::log(0.96), lo, lo,
       std::log(0.96), lo, lo, lo, lo,
       std::log(0.1), lo, lo, std::log(0.4), std::log(0.49),
       std::log(0.96), lo, lo, lo, lo;
  b << std::log(0.1), lo, std::log(0.4), lo, std::log(0.49),
       std::log(0.96), lo, lo, lo, lo,
       lo, lo, lo, std::log(0.96), lo,
       std::log(0.96), lo, lo, lo, lo;
  // Shared attention: first token a or c, second b or c, then eos.
  RowMatrix att(3, 5);
  att << kLogZero, std::log(0.05), std::log(0.45), std::log(0.05), std::log(0.45),
         kLogZero, std::log(0.05), std::log(0.05), std::log(0.45), std::log(0.45),
         kLogZero, std::log(0.97), std::log(0.01), std::log(0.01), std::log(0.01);
  const ModelInputs ma = Inputs(a, att), mb = Inputs(b, att);
  const DecodeConfig cfg = Wide(20);
  const auto alone_a = EnsembleBeamSearch({ma}, v, nullptr, FusionWeights::FromLambda(0.3), cfg);
  const auto alone_b = EnsembleBeamSearch({mb}, v, nullptr, FusionWeights::FromLambda(0.3), cfg);
  const auto both = EnsembleBeamSearch({ma, mb}, v, nullptr, FusionWeights::Uniform(2), cfg);
  const std::vector<TokenId> ab = {2, 3};
  EXPECT_EQ(alone_a.best().labels, (std::vector<TokenId>{2, 4}));
  EXPECT_EQ(alone_b.best().labels, (std::vector<TokenId>{4, 3}));
  EXPECT_EQ(both.best().labels, ab);
  const auto oracle_best = oracle::BruteForceDecode(std::vector<ModelInputs>{ma, mb}, v, nullptr,
                                                    FusionWeights::Uniform(2),
                                                    MaxOutputLength(16, cfg));
  EXPECT_EQ(oracle_best.labels, ab);
}

TEST(BeamSearchTest, PermutingModelsPreservesResults) {
  std::mt19937_64 rng(17);
  const Vocabulary v = Abc();
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<ModelInputs> in;
    for (int i = 0; i < 3; ++i) in.push_back(RandomInputs(rng, 5 + i, 5));
    FusionWeights w;
    w.alpha = {{0.3, 0.1}, {0.2, 0.15}, {0.15, 0.1}};
    const DecodeResult r = EnsembleBeamSearch(in, v, nullptr, w, DecodeConfig{});
    FusionWeights wp;
    wp.alpha = {w.alpha[2], w.alpha[0], w.alpha[1]};
    const DecodeResult rp = EnsembleBeamSearch({in[2], in[0], in[1]}, v, nullptr, wp, DecodeConfig{});
    ASSERT_EQ(r.n_best.size(), rp.n_best.size());
    for (std::size_t k = 0; k < r.n_best.size(); ++k) {
      EXPECT_EQ(r.n_best[k].labels, rp.n_best[k].labels);
      EXPECT_NEAR(r.n_best[k].score, rp.n_best[k].score, 1e-9);
    }
  }
}

TEST(BeamSearchTest, ScoresNeverIncreaseWithoutLm) {
  std::mt19937_64 rng(4);
  const Vocabulary v = Abc();
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<ModelInputs> in = {RandomInputs(rng, 6, 5), RandomInputs(rng, 5, 5)};
    const EnsembleDecoder dec(in, v, nullptr, FusionWeights::Uniform(2), Wide(5));
    std::vector<Hypothesis> frontier = {dec.Initial()};
    while (!frontier.empty()) {
      std::vector<Hypothesis> next;
      for (const Hypothesis& h : frontier) {
        for (const Extension& e : dec.Expand(h)) {
          const Hypothesis n = dec.Advance(h, e);
          EXPECT_LE(n.score, h.score + 1e-12);
          if (!n.finished && next.size() < 20) next.push_back(n);
        }
      }
      frontier = std::move(next);
    }
  }
}

TEST(BeamSearchTest, NBestIsSortedAndBounded) {
  std::mt19937_64 rng(6);
  const Vocabulary v = Abc();
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<ModelInputs> in = {RandomInputs(rng, 6, 5)};
    DecodeConfig cfg;
    const DecodeResult r = EnsembleBeamSearch(in, v, nullptr, FusionWeights::FromLambda(0.3), cfg);
    ASSERT_FALSE(r.n_best.empty());
    const int max_len = MaxOutputLength(24, cfg);
    for (std::size_t k = 0; k < r.n_best.size(); ++k) {
      EXPECT_LE(static_cast<int>(r.n_best[k].labels.size()), max_len);
      for (TokenId t : r.n_best[k].labels) EXPECT_TRUE(v.IsLabel(t));
      if (k > 0) {
        EXPECT_GE(r.n_best[k - 1].score, r.n_best[k].score);
      }
    }
  }
}

TEST(BeamSearchTest, MinlenWithholdsEos) {
  std::mt19937_64 rng(8);
  const Vocabulary v = Abc();
  RowMatrix blanks = RowMatrix::Constant(8, 5, std::log(0.01));
  blanks.col(0).setConstant(std::log(0.96));
  const ModelInputs m = Inputs(blanks, oracle::RandomLogGrid(rng, 3, 5));
  DecodeConfig cfg = Wide(5);
  EXPECT_TRUE(EnsembleBeamSearch({m}, v, nullptr, FusionWeights::FromLambda(0.3), cfg)
                  .best().labels.empty());
  cfg.minlen = 2;
  for (const NBestEntry& e :
       EnsembleBeamSearch({m}, v, nullptr, FusionWeights::FromLambda(0.3), cfg).n_best) {
    EXPECT_GE(e.labels.size(), 2u);
  }
}

TEST(BeamSearchTest, MaxlenUsesShortestModel) {
  std::mt19937_64 rng(2);
  const Vocabulary v = Abc();
  const std::vector<ModelInputs> in = {RandomInputs(rng, 20, 5), RandomInputs(rng, 5, 5)};
  const EnsembleDecoder dec(in, v, nullptr, FusionWeights::Uniform(2), DecodeConfig{});
  EXPECT_EQ(dec.max_length(), MaxOutputLength(20, DecodeConfig{}));
}

TEST(BeamSearchTest, DecodingIsDeterministic) {
  std::mt19937_64 rng(12);
  const Vocabulary v = Abc();
  const std::vector<ModelInputs> in = {RandomInputs(rng, 9, 5), RandomInputs(rng, 9, 5)};
  const DecodeResult a = EnsembleBeamSearch(in, v, nullptr, FusionWeights::Uniform(2), DecodeConfig{});
  const DecodeResult b = EnsembleBeamSearch(in, v, nullptr, FusionWeights::Uniform(2), DecodeConfig{});
  ASSERT_EQ(a.n_best.size(), b.n_best.size());
  for (std::size_t k = 0; k < a.n_best.size(); ++k) {
    EXPECT_EQ(a.n_best[k].labels, b.n_best[k].labels);
    EXPECT_EQ(a.n_best[k].score, b.n_best[k].score);
  }
}

TEST(BeamSearchTest, RejectsInconsistentInputs) {
  std::mt19937_64 rng(1);
  const Vocabulary v = Abc();
  EXPECT_THROW(EnsembleBeamSearch({}, v, nullptr, FusionWeights::Uniform(1), DecodeConfig{}),
               std::invalid_argument);
  const ModelInputs m = RandomInputs(rng, 4, 5);
  EXPECT_THROW(EnsembleBeamSearch({m}, v, nullptr, FusionWeights::Uniform(2), DecodeConfig{}),
               std::invalid_argument);
  FusionWeights bad;
  bad.alpha = {{0.5, 0.2}};
  EXPECT_THROW(EnsembleBeamSearch({m}, v, nullptr, bad, DecodeConfig{}), ConfigError);
  const ModelInputs wrong = RandomInputs(rng, 4, 4);
  EXPECT_THROW(EnsembleBeamSearch({m, wrong}, v, nullptr, FusionWeights::Uniform(2), DecodeConfig{}),
               std::invalid_argument);
}

// ---- Corpus layer --------------------------------------------------------

TEST(ManifestTest, ParsesResolvesAndValidates) {
  std::istringstream is("# comment\nu1\ta.wav\ta b\n\nu2\t/abs/b.wav\n");
  const auto m = ParseManifest(is, "/data");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].audio_path, "/data/a.wav");
  EXPECT_EQ(*m[0].transcript, "a b");
  EXPECT_EQ(m[1].audio_path, "/abs/b.wav");
  EXPECT_FALSE(m[1].transcript);
  std::istringstream dup("u1\ta.wav\nu1\tb.wav\n");
  EXPECT_THROW(ParseManifest(dup, "/"), FormatError);
  std::istringstream bad("only-one-column\n");
  EXPECT_THROW(ParseManifest(bad, "/"), FormatError);
}

// One-hot grids spelling out a label sequence with blanks in between.
ModelInputs Spelled(const std::vector<TokenId>& labels, int n = 5) {
  const int frames = std::max<int>(2 * static_cast<int>(labels.size()), 2) + 4;
  RowMatrix g = RowMatrix::Constant(frames, n, std::log(0.01));
  for (int t = 0; t < frames; ++t) {
    const int k = t / 2;
    const TokenId s = (t % 2 == 0 && k < static_cast<int>(labels.size())) ? labels[k] : 0;
    g(t, s) = std::log(1.0 - 0.01 * (n - 1));
  }
  RowMatrix att = RowMatrix::Constant(1, n, std::log(1.0 / (n - 1)));
  att(0, 0) = kLogZero;
  ModelInputs m = Inputs(g, att);
  m.speech_frames = frames * 4 * 2;
  return m;
}

PreparedUtterance Utt(std::string id, std::string ref, std::vector<ModelInputs> models) {
  return PreparedUtterance{std::move(id), std::move(ref), std::move(models), ""};
}

TEST(CorpusTest, EmptyCorpusGivesEmptyReport) {
  const CorpusReport r =
      DecodePrepared({}, Abc(), nullptr, FusionWeights::Uniform(1), DecodeConfig{}, 2);
  EXPECT_TRUE(r.utterances.empty());
  EXPECT_EQ(r.failures, 0);
  EXPECT_FALSE(r.wer);
}

TEST(CorpusTest, SingleUtteranceMatchesDirectDecode) {
  std::mt19937_64 rng(31);
  const ModelInputs m = RandomInputs(rng, 7, 5);
  const std::vector<PreparedUtterance> corpus = {Utt("x", "a b", {m})};
  const CorpusReport r =
      DecodePrepared(corpus, Abc(), nullptr, FusionWeights::Uniform(1), DecodeConfig{}, 1);
  const DecodeResult direct =
      EnsembleBeamSearch({m}, Abc(), nullptr, FusionWeights::Uniform(1), DecodeConfig{});
  EXPECT_EQ(r.utterances[0].result.best().labels, direct.best().labels);
  EXPECT_EQ(r.utterances[0].result.best().score, direct.best().score);
}

TEST(CorpusTest, PooledWerMatchesHandComputedEditDistances) {
  // Hypotheses: "a b c" vs ref "a b c" (0 errors), "a c" vs "a b c"
  // (1 deletion), "b b" vs "b" (1 insertion): 2 errors over 7 words.
  const std::vector<PreparedUtterance> corpus = {
      Utt("u1", "a b c", {Spelled({2, 3, 4})}),
      Utt("u2", "a b c", {Spelled({2, 4})}),
      Utt("u3", "b", {Spelled({3, 3})})};
  const CorpusReport r =
      DecodePrepared(corpus, Abc(), nullptr, FusionWeights::Uniform(1), Wide(5), 3);
  EXPECT_EQ(r.utterances[0].hypothesis, "a b c");
  EXPECT_EQ(r.utterances[1].hypothesis, "a c");
  EXPECT_EQ(r.utterances[2].hypothesis, "b b");
  ASSERT_TRUE(r.wer);
  EXPECT_EQ(r.wer->ops.deletions, 1);
  EXPECT_EQ(r.wer->ops.insertions, 1);
  EXPECT_EQ(r.wer->reference_tokens, 7);
  EXPECT_DOUBLE_EQ(r.wer->Percent(), 100.0 * 2.0 / 7.0);
}

TEST(CorpusTest, FailuresAreRecordedAndTheRunContinues) {
  std::vector<PreparedUtterance> corpus = {Utt("ok", "a", {Spelled({2})}),
                                           Utt("bad", "a", {}),
                                           Utt("wrong-width", "a", {Spelled({2}, 4)})};
  corpus[1].error = "unreadable audio";
  const CorpusReport r =
      DecodePrepared(corpus, Abc(), nullptr, FusionWeights::Uniform(1), DecodeConfig{}, 2);
  EXPECT_EQ(r.failures, 2);
  EXPECT_TRUE(r.utterances[0].ok());
  EXPECT_EQ(r.utterances[1].error, "unreadable audio");
  EXPECT_FALSE(r.utterances[2].ok());
  EXPECT_DOUBLE_EQ(r.wer->Percent(), 0.0);
}

TEST(CorpusTest, ResultsAreIdenticalAcrossThreadCounts) {
  std::mt19937_64 rng(41);
  std::vector<PreparedUtterance> corpus;
  for (int u = 0; u < 12; ++u) {
    corpus.push_back(Utt("u" + std::to_string(u), "a b",
                         {RandomInputs(rng, 6 + u % 4, 5), RandomInputs(rng, 7, 5)}));
  }
  const Vocabulary v = Abc();
  const std::vector<std::string> names = {"m1", "m2"};
  std::string outputs[2];
  int k = 0;
  for (int jobs : {1, 4}) {
    std::ostringstream os;
    WriteResultsJsonl(os, DecodePrepared(corpus, v, nullptr, FusionWeights::Uniform(2),
                                         DecodeConfig{}, jobs),
                      v, names);
    outputs[k++] = os.str();
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_NE(outputs[0].find("\"per_scorer_scores\""), std::string::npos);
}

TEST(AblationTest, DuplicateModelAddsNothing) {
  std::mt19937_64 rng(51);
  std::vector<PreparedUtterance> corpus;
  for (int u = 0; u < 5; ++u) {
    const ModelInputs m = RandomInputs(rng, 8, 5);
    corpus.push_back(Utt("u" + std::to_string(u), "a b", {m, m}));
  }
  const auto rows = RunAblation(corpus, Abc(), nullptr, std::nullopt, DecodeConfig{}, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].weights.lm_weight, 1.2);
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    EXPECT_EQ(rows[0].report.utterances[u].result.best().labels,
              rows[1].report.utterances[u].result.best().labels);
  }
  EXPECT_EQ(rows[0].report.wer->Percent(), rows[1].report.wer->Percent());
  const std::vector<PreparedUtterance> single = {Utt("u", "a", {Spelled({2})})};
  EXPECT_THROW(RunAblation(single, Abc(), nullptr, std::nullopt, DecodeConfig{}, 1), ConfigError);
}

}  // namespace
}  // namespace fusebeam
