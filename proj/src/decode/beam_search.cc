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

#include "fusebeam/decode/beam_search.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "fusebeam/log_math.h"

namespace fusebeam {

int Hypothesis::num_labels() const {
  return static_cast<int>(tokens.size()) - 1 - (finished ? 1 : 0);
}

namespace {

// Lexicographic comparison of `prefix + [last]` sequences.
bool LexLess(std::span<const TokenId> a, TokenId a_last, std::span<const TokenId> b,
             TokenId b_last) {
  const std::size_t na = a.size() + 1, nb = b.size() + 1;
  for (std::size_t k = 0; k < std::min(na, nb); ++k) {
    const TokenId x = k < a.size() ? a[k] : a_last;
    const TokenId y = k < b.size() ? b[k] : b_last;
    if (x != y) return x < y;
  }
  return na < nb;
}

}  // namespace

bool BetterHypothesis(double score_a, std::span<const TokenId> tokens_a,
                      double score_b, std::span<const TokenId> tokens_b) {
  if (score_a != score_b) return score_a > score_b;
  return std::lexicographical_compare(tokens_a.begin(), tokens_a.end(),
                                      tokens_b.begin(), tokens_b.end());
}

EnsembleDecoder::EnsembleDecoder(std::vector<ModelInputs> models, Vocabulary vocab,
                                 const NGramLm* lm, FusionWeights weights,
                                 DecodeConfig cfg)
    : models_(std::move(models)),
      vocab_(std::move(vocab)),
      lm_(lm),
      weights_(std::move(weights)),
      cfg_(cfg) {
  if (models_.empty()) throw std::invalid_argument("ensemble needs at least one model");
  weights_.Validate();
  cfg_.Validate();
  if (weights_.num_models() != num_models()) {
    throw std::invalid_argument("fusion weights cover " +
                                std::to_string(weights_.num_models()) +
                                " models but " + std::to_string(num_models()) +
                                " were given");
  }
  int min_frames = 0;
  for (const ModelInputs& m : models_) {
    if (!m.attention) throw std::invalid_argument("model without attention scorer");
    if (m.attention->vocab_size() != vocab_.size() || m.ctc.vocab_size() != vocab_.size()) {
      throw std::invalid_argument("model vocabulary size does not match the ensemble");
    }
    if (m.ctc.num_frames() < 1) throw std::invalid_argument("empty CTC grid");
    const int frames = m.speech_frames > 0 ? m.speech_frames
                                           : m.ctc.num_frames() * cfg_.subsample_factor;
    min_frames = min_frames == 0 ? frames : std::min(min_frames, frames);
  }
  max_length_ = MaxOutputLength(min_frames, cfg_);
}

Hypothesis EnsembleDecoder::Initial() const {
  Hypothesis hyp;
  hyp.tokens = {vocab_.sos_id()};
  hyp.breakdown.models.assign(models_.size(), {0.0, 0.0});
  for (const ModelInputs& m : models_) {
    hyp.ctc_states.push_back(CtcPrefixScorer(m.ctc, vocab_).InitialState());
  }
  return hyp;
}

std::vector<Extension> EnsembleDecoder::Expand(const Hypothesis& hyp) const {
  if (hyp.finished) throw std::invalid_argument("cannot expand a finished hypothesis");
  const int labels = hyp.num_labels();
  const TokenId eos = vocab_.eos_id();

  std::vector<std::vector<double>> att;
  att.reserve(models_.size());
  for (const ModelInputs& m : models_) att.push_back(m.attention->LogProbs(hyp.tokens));

  std::vector<TokenId> selected;
  if (labels >= max_length_) {
    selected = {eos};
  } else {
    std::vector<TokenId> pool;
    for (TokenId c : vocab_.Candidates()) {
      if (c == eos && labels < cfg_.minlen) continue;
      pool.push_back(c);
    }
    selected = PreBeamSelect(att, weights_, cfg_.PreBeamSize(), pool);
  }

  std::vector<double> lm_scores;
  if (lm_ != nullptr) lm_scores = lm_->ScoreStep(hyp.tokens);

  std::vector<std::vector<CtcExtension>> ctc(models_.size());
  for (std::size_t i = 0; i < models_.size(); ++i) {
    ctc[i] = CtcPrefixScorer(models_[i].ctc, vocab_)
                 .Extend(hyp.tokens, hyp.ctc_states[i], selected);
  }

  std::vector<Extension> out(selected.size());
  for (std::size_t k = 0; k < selected.size(); ++k) {
    Extension& ext = out[k];
    ext.token = selected[k];
    ext.step_scores.resize(models_.size());
    for (std::size_t i = 0; i < models_.size(); ++i) {
      ext.step_scores[i] = {att[i][ext.token], ctc[i][k].score};
    }
    ext.step_score = CombinedScore(ext.step_scores, weights_);
    if (lm_ != nullptr) {
      ext.step_lm = lm_scores[ext.token];
      ext.step_score += weights_.lm_weight * ext.step_lm;
    }
    if (ext.token != eos) {
      for (auto& e : ctc) ext.ctc_states.push_back(std::move(e[k].state));
    }
  }
  return out;
}

Hypothesis EnsembleDecoder::Advance(const Hypothesis& hyp, const Extension& ext) const {
  Hypothesis next;
  next.tokens = hyp.tokens;
  next.tokens.push_back(ext.token);
  next.score = hyp.score + ext.step_score;
  next.breakdown = hyp.breakdown;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    next.breakdown.models[i][kAttention] += ext.step_scores[i][kAttention];
    next.breakdown.models[i][kCtc] += ext.step_scores[i][kCtc];
  }
  next.breakdown.lm += ext.step_lm;
  next.finished = ext.token == vocab_.eos_id();
  if (!next.finished) next.ctc_states = ext.ctc_states;
  return next;
}

DecodeResult EnsembleDecoder::Search() const {
  struct Candidate {
    std::size_t parent;
    Extension ext;
    double total;
  };
  std::vector<Hypothesis> running = {Initial()};
  std::vector<Hypothesis> finished;

  while (!running.empty()) {
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < running.size(); ++p) {
      for (Extension& ext : Expand(running[p])) {
        const double total = running[p].score + ext.step_score;
        candidates.push_back({p, std::move(ext), total});
      }
    }
    const auto better = [&](const Candidate& a, const Candidate& b) {
      if (a.total != b.total) return a.total > b.total;
      return LexLess(running[a.parent].tokens, a.ext.token, running[b.parent].tokens,
                     b.ext.token);
    };
    const std::size_t keep =
        std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(cfg_.beam_size));
    std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(),
                      better);

    std::vector<Hypothesis> next;
    for (std::size_t k = 0; k < keep; ++k) {
      Hypothesis h = Advance(running[candidates[k].parent], candidates[k].ext);
      (h.finished ? finished : next).push_back(std::move(h));
    }
    running = std::move(next);
  }

  std::sort(finished.begin(), finished.end(), [](const Hypothesis& a, const Hypothesis& b) {
    return BetterHypothesis(a.score, a.tokens, b.score, b.tokens);
  });
  DecodeResult result;
  for (Hypothesis& h : finished) {
    NBestEntry entry;
    entry.labels.assign(h.tokens.begin() + 1, h.tokens.end() - 1);
    entry.score = h.score;
    entry.breakdown = std::move(h.breakdown);
    result.n_best.push_back(std::move(entry));
  }
  return result;
}

DecodeResult EnsembleBeamSearch(std::vector<ModelInputs> models, const Vocabulary& vocab,
                                const NGramLm* lm, const FusionWeights& weights,
                                const DecodeConfig& cfg) {
  return EnsembleDecoder(std::move(models), vocab, lm, weights, cfg).Search();
}

}  // namespace fusebeam
